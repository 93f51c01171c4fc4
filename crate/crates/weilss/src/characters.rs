//! Characters of finite abelian groups, the Frobenius action on them, and the
//! orbit-based supersingularity criteria as pure decision procedures.
//!
//! A character of G = Z/n_1 x ... x Z/n_t is an exponent tuple; the Frobenius
//! acts by per-factor multipliers (optionally composed with a permutation of
//! factors) or by a full integer matrix, which is validated but not
//! decomposed. Everything here is modular arithmetic — no field arithmetic is
//! needed at criterion level.

use serde::{Deserialize, Serialize};

use crate::cyclotomic::gcd;
use crate::error::{Error, Result};

/// Presentation of a finite abelian group as a product of cyclic factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    factor_orders: Vec<u64>,
}

impl GroupSpec {
    pub fn new(factor_orders: Vec<u64>) -> Self {
        assert!(
            !factor_orders.is_empty() && factor_orders.iter().all(|&n| n >= 1),
            "factor orders must be positive"
        );
        GroupSpec { factor_orders }
    }

    pub fn factor_orders(&self) -> &[u64] {
        &self.factor_orders
    }

    pub fn order(&self) -> u64 {
        self.factor_orders.iter().product()
    }

    /// Iterate all characters (all exponent tuples).
    pub fn all_characters(&self) -> Vec<GroupCharacter> {
        let mut out = Vec::with_capacity(self.order() as usize);
        let mut e = vec![0u64; self.factor_orders.len()];
        loop {
            out.push(GroupCharacter::new(self, e.clone()));
            let mut pos = 0;
            loop {
                if pos == e.len() {
                    return out;
                }
                e[pos] += 1;
                if e[pos] == self.factor_orders[pos] {
                    e[pos] = 0;
                    pos += 1;
                } else {
                    break;
                }
            }
        }
    }

    pub fn trivial_character(&self) -> GroupCharacter {
        GroupCharacter {
            exponents: vec![0; self.factor_orders.len()],
        }
    }
}

/// Character as an exponent tuple (e_1, ..., e_t), e_i mod n_i.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupCharacter {
    exponents: Vec<u64>,
}

impl GroupCharacter {
    pub fn new(group: &GroupSpec, exponents: Vec<u64>) -> Self {
        assert_eq!(exponents.len(), group.factor_orders.len());
        let exponents = exponents
            .iter()
            .zip(&group.factor_orders)
            .map(|(e, n)| e % n)
            .collect();
        GroupCharacter { exponents }
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    /// The inverse character, exponentwise negation.
    pub fn inverse(&self, group: &GroupSpec) -> GroupCharacter {
        let exponents = self
            .exponents
            .iter()
            .zip(&group.factor_orders)
            .map(|(&e, &n)| if e == 0 { 0 } else { n - e })
            .collect();
        GroupCharacter { exponents }
    }
}

/// The induced Frobenius action on characters.
///
/// `PerFactor` multiplies the i-th exponent by `multipliers[i]` and then
/// optionally moves it to slot `permutation[i]`; this covers every case in
/// the source material (g -> g^q on roots of unity, identity on an additive
/// factor). `Matrix` applies an arbitrary integer matrix to the exponent
/// tuple and is validated by checking bijectivity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum FrobeniusAction {
    PerFactor {
        multipliers: Vec<u64>,
        permutation: Option<Vec<usize>>,
    },
    Matrix {
        rows: Vec<Vec<u64>>,
    },
}

impl FrobeniusAction {
    pub fn per_factor(multipliers: Vec<u64>) -> Self {
        FrobeniusAction::PerFactor {
            multipliers,
            permutation: None,
        }
    }

    /// Multiplication by q on every factor.
    pub fn mult_by(q: u64, factors: usize) -> Self {
        Self::per_factor(vec![q; factors])
    }

    pub fn matrix(rows: Vec<Vec<u64>>) -> Self {
        FrobeniusAction::Matrix { rows }
    }

    pub fn validate(&self, group: &GroupSpec) -> Result<()> {
        let t = group.factor_orders.len();
        match self {
            FrobeniusAction::PerFactor {
                multipliers,
                permutation,
            } => {
                if multipliers.len() != t {
                    return Err(Error::InvalidAction(format!(
                        "expected {t} multipliers, got {}",
                        multipliers.len()
                    )));
                }
                for (i, (&m, &n)) in multipliers.iter().zip(&group.factor_orders).enumerate() {
                    if gcd(m % n.max(1), n) != 1 && n > 1 {
                        return Err(Error::InvalidAction(format!(
                            "multiplier {m} is not a unit mod factor order {n} (slot {i})"
                        )));
                    }
                }
                if let Some(perm) = permutation {
                    let mut seen = vec![false; t];
                    if perm.len() != t {
                        return Err(Error::InvalidAction("permutation length mismatch".into()));
                    }
                    for (i, &to) in perm.iter().enumerate() {
                        if to >= t || seen[to] {
                            return Err(Error::InvalidAction("not a permutation".into()));
                        }
                        if group.factor_orders[to] != group.factor_orders[i] {
                            return Err(Error::InvalidAction(
                                "permutation mixes factors of different order".into(),
                            ));
                        }
                        seen[to] = true;
                    }
                }
                Ok(())
            }
            FrobeniusAction::Matrix { rows } => {
                if rows.len() != t || rows.iter().any(|r| r.len() != t) {
                    return Err(Error::InvalidAction("matrix shape mismatch".into()));
                }
                // well-defined on ⊕ Z/n_i: n_i | rows[i][j] * n_j
                for i in 0..t {
                    for j in 0..t {
                        let ni = group.factor_orders[i];
                        let nj = group.factor_orders[j];
                        if (rows[i][j] as u128 * nj as u128) % ni as u128 != 0 {
                            return Err(Error::InvalidAction(format!(
                                "entry ({i},{j}) does not respect the factor orders"
                            )));
                        }
                    }
                }
                // bijectivity by full enumeration; groups here are desk-scale
                const ENUM_BOUND: u64 = 1 << 20;
                if group.order() > ENUM_BOUND {
                    return Err(Error::InvalidAction(format!(
                        "matrix validation needs |G| <= {ENUM_BOUND}"
                    )));
                }
                let mut seen = std::collections::HashSet::new();
                for chi in group.all_characters() {
                    if !seen.insert(self.apply_unchecked(group, &chi)) {
                        return Err(Error::InvalidAction("matrix action is not a bijection".into()));
                    }
                }
                Ok(())
            }
        }
    }

    /// Apply the action to one character.
    pub fn apply(&self, group: &GroupSpec, chi: &GroupCharacter) -> Result<GroupCharacter> {
        self.validate(group)?;
        Ok(self.apply_unchecked(group, chi))
    }

    fn apply_unchecked(&self, group: &GroupSpec, chi: &GroupCharacter) -> GroupCharacter {
        let n = &group.factor_orders;
        match self {
            FrobeniusAction::PerFactor {
                multipliers,
                permutation,
            } => {
                let mut out = vec![0u64; n.len()];
                for i in 0..n.len() {
                    let to = permutation.as_ref().map(|p| p[i]).unwrap_or(i);
                    out[to] = (chi.exponents[i] as u128 * multipliers[i] as u128 % n[to] as u128)
                        as u64;
                }
                GroupCharacter { exponents: out }
            }
            FrobeniusAction::Matrix { rows } => {
                let mut out = vec![0u64; n.len()];
                for i in 0..n.len() {
                    let mut acc: u128 = 0;
                    for j in 0..n.len() {
                        acc += rows[i][j] as u128 * chi.exponents[j] as u128;
                    }
                    out[i] = (acc % n[i] as u128) as u64;
                }
                GroupCharacter { exponents: out }
            }
        }
    }
}

/// Outcome of an orbit criterion, with the orbits as witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionReport {
    pub holds: bool,
    pub orbits: Vec<Vec<GroupCharacter>>,
    pub violating_orbit: Option<Vec<GroupCharacter>>,
}

/// The Frobenius orbit of chi: (chi, chi^F, chi^{F^2}, ...) up to first
/// repetition.
pub fn frobenius_orbit(
    group: &GroupSpec,
    action: &FrobeniusAction,
    chi: &GroupCharacter,
) -> Result<Vec<GroupCharacter>> {
    action.validate(group)?;
    let mut orbit = vec![chi.clone()];
    let mut cur = action.apply_unchecked(group, chi);
    while cur != *chi {
        orbit.push(cur.clone());
        cur = action.apply_unchecked(group, &cur);
        assert!(
            orbit.len() <= group.order() as usize,
            "orbit exceeded the group order; action is not invertible"
        );
    }
    Ok(orbit)
}

/// Sufficient criterion: every character in `chars` has its inverse inside
/// its own Frobenius orbit. When this holds the module is supersingular.
pub fn check_sufficient(
    group: &GroupSpec,
    action: &FrobeniusAction,
    chars: &[GroupCharacter],
) -> Result<CriterionReport> {
    action.validate(group)?;
    let mut orbits = Vec::new();
    let mut violating = None;
    let mut holds = true;
    for chi in chars {
        let orbit = frobenius_orbit(group, action, chi)?;
        if !orbit.contains(&chi.inverse(group)) && holds {
            holds = false;
            violating = Some(orbit.clone());
        }
        orbits.push(orbit);
    }
    Ok(CriterionReport {
        holds,
        orbits,
        violating_orbit: violating,
    })
}

/// Necessary-direction hypothesis: some character in `chars` has its inverse
/// outside its orbit, which (under the q = p, weight-1 side conditions the
/// caller is responsible for) certifies NOT supersingular. `holds` here
/// asserts that hypothesis, the logical negation of [`check_sufficient`]
/// restricted to the same set.
pub fn check_necessary(
    group: &GroupSpec,
    action: &FrobeniusAction,
    chars: &[GroupCharacter],
) -> Result<CriterionReport> {
    let report = check_sufficient(group, action, chars)?;
    Ok(CriterionReport {
        holds: !report.holds,
        orbits: report.orbits,
        violating_orbit: report.violating_orbit,
    })
}

/// Does some power of q hit -1 mod n? Returns the minimal witness s.
///
/// Equivalent to [`check_sufficient`] on Z/n with multiplication by q and the
/// full set of nontrivial characters. Note that the condition is not stable
/// under base extension: it holds for (2, 3) but fails for (4, 3).
///
/// ```
/// use weilss::characters::minus_one_power_condition;
///
/// assert_eq!(minus_one_power_condition(2, 3).unwrap(), (true, Some(1)));
/// assert_eq!(minus_one_power_condition(4, 3).unwrap(), (false, None));
/// assert_eq!(minus_one_power_condition(3, 5).unwrap(), (true, Some(2)));
/// ```
pub fn minus_one_power_condition(q: u64, n: u64) -> Result<(bool, Option<u64>)> {
    assert!(q >= 2 && n >= 1);
    if gcd(q % n.max(1), n) != 1 {
        return Err(Error::NotCoprime(q, n));
    }
    if n == 1 {
        return Ok((true, Some(1))); // vacuous modulus
    }
    let target = n - 1;
    let mut pow = 1u64;
    for s in 1..=n {
        pow = (pow as u128 * (q % n) as u128 % n as u128) as u64;
        if pow == target {
            return Ok((true, Some(s)));
        }
        if pow == 1 {
            break; // cycled back without hitting -1
        }
    }
    Ok((false, None))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zmod(n: u64) -> GroupSpec {
        GroupSpec::new(vec![n])
    }

    fn chi(group: &GroupSpec, e: &[u64]) -> GroupCharacter {
        GroupCharacter::new(group, e.to_vec())
    }

    #[test]
    fn orbit_examples() {
        let g3 = zmod(3);
        let f = FrobeniusAction::mult_by(2, 1);
        let orbit = frobenius_orbit(&g3, &f, &chi(&g3, &[1])).unwrap();
        assert_eq!(orbit, vec![chi(&g3, &[1]), chi(&g3, &[2])]);

        // the trivial character is a fixed point of any action
        assert_eq!(
            frobenius_orbit(&g3, &f, &g3.trivial_character()).unwrap().len(),
            1
        );

        let g5 = zmod(5);
        let f3 = FrobeniusAction::mult_by(3, 1);
        let orbit = frobenius_orbit(&g5, &f3, &chi(&g5, &[1])).unwrap();
        assert_eq!(
            orbit,
            vec![chi(&g5, &[1]), chi(&g5, &[3]), chi(&g5, &[4]), chi(&g5, &[2])]
        );
    }

    #[test]
    fn orbit_lengths_partition_the_character_group() {
        for (n, q) in [(15u64, 2u64), (21, 5), (16, 3), (9, 2)] {
            let g = zmod(n);
            let f = FrobeniusAction::mult_by(q, 1);
            let mut seen = std::collections::HashSet::new();
            let mut total = 0usize;
            for c in g.all_characters() {
                if seen.contains(&c) {
                    continue;
                }
                let orbit = frobenius_orbit(&g, &f, &c).unwrap();
                total += orbit.len();
                for member in orbit {
                    assert!(seen.insert(member));
                }
            }
            assert_eq!(total as u64, g.order());
        }
    }

    #[test]
    fn sufficient_criterion_examples() {
        let g3 = zmod(3);
        let f = FrobeniusAction::mult_by(2, 1);
        let rep = check_sufficient(&g3, &f, &[chi(&g3, &[1]), chi(&g3, &[2])]).unwrap();
        assert!(rep.holds && rep.violating_orbit.is_none());

        // trivial character is self-inverse
        let rep = check_sufficient(&g3, &f, &[g3.trivial_character()]).unwrap();
        assert!(rep.holds);

        // Z/11 with multiplication by 5: orbit of (1) is {1,5,3,4,9}, misses 10
        let g11 = zmod(11);
        let f5 = FrobeniusAction::mult_by(5, 1);
        let rep = check_sufficient(&g11, &f5, &[chi(&g11, &[1])]).unwrap();
        assert!(!rep.holds);
        let necessary = check_necessary(&g11, &f5, &[chi(&g11, &[1])]).unwrap();
        assert!(necessary.holds);

        // Z/3 with multiplication by 4 = 1: orbit {1}, inverse 2 absent
        let f4 = FrobeniusAction::mult_by(4, 1);
        let rep = check_necessary(&g3, &f4, &[chi(&g3, &[1])]).unwrap();
        assert!(rep.holds);
    }

    #[test]
    fn odd_characteristic_additive_factor_blocks_the_criterion() {
        // G = Z/3 x Z/4 with F = (x1, x3): inverse flips the first exponent,
        // the orbit never does.
        let g = GroupSpec::new(vec![3, 4]);
        let f = FrobeniusAction::per_factor(vec![1, 3]);
        let chars: Vec<_> = g
            .all_characters()
            .into_iter()
            .filter(|c| c.exponents()[0] != 0 && c.exponents()[1] != 0)
            .collect();
        let rep = check_sufficient(&g, &f, &chars).unwrap();
        assert!(!rep.holds);
        assert!(check_necessary(&g, &f, &chars).unwrap().holds);
    }

    #[test]
    fn char_2_additive_factor_is_self_inverse() {
        // In characteristic 2 the additive factor is 2-torsion, so negation
        // fixes it and the criterion reduces to the root-of-unity factor.
        let g = GroupSpec::new(vec![2, 3]);
        let f = FrobeniusAction::per_factor(vec![1, 2]);
        let chars: Vec<_> = g
            .all_characters()
            .into_iter()
            .filter(|c| c.exponents()[0] != 0 && c.exponents()[1] != 0)
            .collect();
        let rep = check_sufficient(&g, &f, &chars).unwrap();
        assert!(rep.holds, "(1,1) orbit is {{(1,1),(1,2)}} which contains the inverse");
    }

    #[test]
    fn criterion_is_orbit_invariant() {
        let g = zmod(13);
        let f = FrobeniusAction::mult_by(3, 1);
        let base = chi(&g, &[1]);
        let orbit = frobenius_orbit(&g, &f, &base).unwrap();
        let expect = check_sufficient(&g, &f, &[base]).unwrap().holds;
        for member in orbit {
            assert_eq!(check_sufficient(&g, &f, &[member]).unwrap().holds, expect);
        }
    }

    #[test]
    fn minus_one_power_examples() {
        assert_eq!(minus_one_power_condition(2, 3).unwrap(), (true, Some(1)));
        assert_eq!(minus_one_power_condition(7, 1).unwrap(), (true, Some(1)));
        assert_eq!(minus_one_power_condition(5, 11).unwrap(), (false, None));
        assert_eq!(minus_one_power_condition(3, 5).unwrap(), (true, Some(2)));
        assert_eq!(minus_one_power_condition(4, 2), Err(Error::NotCoprime(4, 2)));
        // extending the base field can break the condition; this asymmetry is real
        assert_eq!(minus_one_power_condition(4, 3).unwrap(), (false, None));
    }

    #[test]
    fn minus_one_power_matches_orbit_criterion() {
        for n in 1..=100u64 {
            for q in 2..n {
                if gcd(q, n) != 1 {
                    continue;
                }
                let (cond, _) = minus_one_power_condition(q, n).unwrap();
                let g = zmod(n);
                let f = FrobeniusAction::mult_by(q, 1);
                let chars: Vec<_> = g
                    .all_characters()
                    .into_iter()
                    .filter(|c| !c.is_trivial())
                    .collect();
                let rep = check_sufficient(&g, &f, &chars).unwrap();
                assert_eq!(cond, rep.holds, "n={n} q={q}");
            }
        }
    }

    #[test]
    fn matrix_actions_are_validated() {
        let g = GroupSpec::new(vec![2, 2]);
        // Frobenius of F_4 in the basis 1, t with t^2 = t + 1: 1 -> 1, t -> t + 1
        let frob = FrobeniusAction::matrix(vec![vec![1, 1], vec![0, 1]]);
        assert!(frob.validate(&g).is_ok());
        let orbit = frobenius_orbit(&g, &frob, &chi(&g, &[0, 1])).unwrap();
        assert_eq!(orbit.len(), 2);

        let singular = FrobeniusAction::matrix(vec![vec![1, 1], vec![1, 1]]);
        assert!(matches!(singular.validate(&g), Err(Error::InvalidAction(_))));

        let g_mixed = GroupSpec::new(vec![2, 3]);
        let bad_shape = FrobeniusAction::matrix(vec![vec![1, 1], vec![0, 1]]);
        // off-diagonal entry 1 does not kill Z/3 -> Z/2
        assert!(bad_shape.validate(&g_mixed).is_err());
    }
}

//! Global representation of integers by diagonal ternary forms
//! c1 y1^2 + c2 y2^2 + c3 y3^2 = n.
//!
//! The engine layers a local-solvability screen over a bounded exhaustive
//! search. A failed search never proves non-representability (indefinite
//! ternary forms can have spinor exceptions), so the outcome type keeps
//! `Unknown` as a first-class answer; only a failed local test yields the
//! definitive `LocallyImpossible`.

use crate::arith::{factorize, perfect_square_root};
use crate::error::{Error, Result};
use crate::local::local_solvable;
use crate::quaternion::Place;

/// Diagonal integral ternary form with nonzero coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TernaryForm {
    pub coefficients: (i64, i64, i64),
}

impl TernaryForm {
    pub fn new(c1: i64, c2: i64, c3: i64) -> Result<Self> {
        if c1 == 0 || c2 == 0 || c3 == 0 {
            return Err(Error::ZeroFormCoefficient);
        }
        Ok(TernaryForm {
            coefficients: (c1, c2, c3),
        })
    }

    /// (#positive, #negative) coefficients.
    pub fn signature(&self) -> (usize, usize) {
        let cs = [self.coefficients.0, self.coefficients.1, self.coefficients.2];
        let pos = cs.iter().filter(|&&c| c > 0).count();
        (pos, 3 - pos)
    }

    pub fn is_indefinite(&self) -> bool {
        let (pos, neg) = self.signature();
        pos > 0 && neg > 0
    }

    pub fn coefficient(&self, i: usize) -> i64 {
        match i {
            0 => self.coefficients.0,
            1 => self.coefficients.1,
            2 => self.coefficients.2,
            _ => panic!("coefficient index out of range"),
        }
    }

    /// Exact evaluation with i128 intermediates.
    pub fn evaluate(&self, y: (i64, i64, i64)) -> i128 {
        let (c1, c2, c3) = self.coefficients;
        c1 as i128 * (y.0 as i128) * (y.0 as i128)
            + c2 as i128 * (y.1 as i128) * (y.1 as i128)
            + c3 as i128 * (y.2 as i128) * (y.2 as i128)
    }
}

/// Bounds for the exhaustive search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Maximum absolute value scanned for the sliced coordinate.
    pub box_bound: i64,
    /// Maximum number of candidate evaluations before giving up.
    pub node_cap: u64,
}

impl SearchBudget {
    pub fn new(box_bound: i64, node_cap: u64) -> Result<Self> {
        if box_bound <= 0 || node_cap == 0 {
            return Err(Error::BadBudget);
        }
        Ok(SearchBudget { box_bound, node_cap })
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            box_bound: 10_000,
            node_cap: 5_000_000,
        }
    }
}

/// Three-valued result of a representation query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RepOutcome {
    /// Exact witness; always verified against the form equation.
    Found(i64, i64, i64),
    /// A completion of Q where the equation has no solution.
    LocallyImpossible(Place),
    /// Bounded search exhausted without a verdict.
    Unknown { nodes_examined: u64 },
}

impl RepOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, RepOutcome::Found(..))
    }
}

/// Exhaustive scan: slice the coordinate whose coefficient sign is in the
/// minority, and solve the induced definite binary section exactly per slice.
/// Deterministic: slices ascend from 0, and the first exact solution in scan
/// order is returned with nonnegative coordinates. Never claims
/// `LocallyImpossible`.
pub fn brute_force_represent(form: &TernaryForm, n: i64, budget: &SearchBudget) -> RepOutcome {
    let slice_idx = minority_index(form);
    let (i, j) = other_indices(slice_idx);
    let cs = form.coefficient(slice_idx);
    let (ci, cj) = (form.coefficient(i), form.coefficient(j));
    debug_assert!(ci.signum() == cj.signum());

    let mut nodes: u64 = 0;
    for s in 0..=budget.box_bound {
        nodes += 1;
        if nodes > budget.node_cap {
            return RepOutcome::Unknown {
                nodes_examined: nodes - 1,
            };
        }
        let t = n as i128 - cs as i128 * (s as i128) * (s as i128);
        // The remaining pair has a single sign: flip everything nonnegative.
        let sign = ci.signum() as i128;
        let t = t * sign;
        if t < 0 {
            if (cs.signum() as i128) * sign < 0 {
                // Mixed-sign slice: t grows with s, keep scanning.
                continue;
            } else {
                // Definite: t only decreases from here on.
                break;
            }
        }
        let (ai, aj) = (ci.unsigned_abs() as i128, cj.unsigned_abs() as i128);
        let mut yi: i128 = 0;
        while ai * yi * yi <= t {
            nodes += 1;
            if nodes > budget.node_cap {
                return RepOutcome::Unknown {
                    nodes_examined: nodes - 1,
                };
            }
            let rem = t - ai * yi * yi;
            if rem % aj == 0 {
                if let Some(yj) = i64::try_from(rem / aj).ok().and_then(perfect_square_root) {
                    let mut out = [0i64; 3];
                    out[slice_idx] = s;
                    out[i] = yi as i64;
                    out[j] = yj;
                    let w = (out[0], out[1], out[2]);
                    debug_assert_eq!(form.evaluate(w), n as i128);
                    return RepOutcome::Found(w.0, w.1, w.2);
                }
            }
            yi += 1;
        }
    }
    RepOutcome::Unknown {
        nodes_examined: nodes,
    }
}

/// Index of the coefficient whose sign differs from the other two; for
/// definite forms the last coordinate is sliced (every slice is bounded).
fn minority_index(form: &TernaryForm) -> usize {
    let signs = [
        form.coefficients.0.signum(),
        form.coefficients.1.signum(),
        form.coefficients.2.signum(),
    ];
    let pos = signs.iter().filter(|&&s| s > 0).count();
    match pos {
        0 | 3 => 2,
        1 => signs.iter().position(|&s| s > 0).unwrap(),
        _ => signs.iter().position(|&s| s < 0).unwrap(),
    }
}

fn other_indices(slice: usize) -> (usize, usize) {
    match slice {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// Local-global guided representation: test solvability at the real place,
/// at every prime dividing 2 c1 c2 c3, and at primes whose square divides n;
/// any failure is decisive. Otherwise fall back to the bounded search.
pub fn represent(form: &TernaryForm, n: i64, budget: &SearchBudget) -> RepOutcome {
    let (c1, c2, c3) = form.coefficients;
    if !local_solvable(form.coefficients, n, Place::Infinity) {
        return RepOutcome::LocallyImpossible(Place::Infinity);
    }
    let mut probes: Vec<u64> = factorize(2 * c1.unsigned_abs() * c2.unsigned_abs() * c3.unsigned_abs())
        .into_iter()
        .map(|(p, _)| p)
        .collect();
    for (p, t) in factorize(n.unsigned_abs().max(1)) {
        if t >= 2 && !probes.contains(&p) {
            probes.push(p);
        }
    }
    probes.sort_unstable();
    for p in probes {
        if !local_solvable(form.coefficients, n, Place::Prime(p)) {
            return RepOutcome::LocallyImpossible(Place::Prime(p));
        }
    }
    brute_force_represent(form, n, budget)
}

/// Classical admissibility criterion: n is a sum of three squares iff it is
/// not of the form 4^a (8m + 7).
pub fn legendre_admissible(n: u64) -> bool {
    let mut n = n;
    while n % 4 == 0 {
        n /= 4;
    }
    n % 8 != 7
}

/// Bounded search for n = y1^2 + y2^2 + y3^2 with 0 <= y1 <= y2 <= y3.
pub fn three_squares(n: u64) -> RepOutcome {
    let mut nodes: u64 = 0;
    let root = n.isqrt() as i64;
    let n = n as i64;
    for y1 in 0..=root {
        let r1 = n - y1 * y1;
        if r1 < y1 * y1 {
            break;
        }
        let mut y2 = y1;
        loop {
            let r2 = r1 - y2 * y2;
            if r2 < y2 * y2 {
                break;
            }
            nodes += 1;
            if let Some(y3) = perfect_square_root(r2) {
                return RepOutcome::Found(y1, y2, y3);
            }
            y2 += 1;
        }
    }
    RepOutcome::Unknown {
        nodes_examined: nodes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn form(c1: i64, c2: i64, c3: i64) -> TernaryForm {
        TernaryForm::new(c1, c2, c3).unwrap()
    }

    fn budget(box_bound: i64) -> SearchBudget {
        SearchBudget::new(box_bound, 50_000_000).unwrap()
    }

    #[test]
    fn signature_and_validation() {
        assert_eq!(form(2, 3, -6).signature(), (2, 1));
        assert_eq!(form(1, 1, 1).signature(), (3, 0));
        assert!(form(2, 3, -6).is_indefinite());
        assert!(!form(1, 1, 1).is_indefinite());
        assert!(TernaryForm::new(0, 1, 1).is_err());
    }

    #[test]
    fn brute_force_examples() {
        // 2 + 27 - 6 = 23
        assert_eq!(
            brute_force_represent(&form(2, 3, -6), 23, &budget(100)),
            RepOutcome::Found(1, 3, 1)
        );
        assert_eq!(
            brute_force_represent(&form(1, 1, 1), 0, &budget(100)),
            RepOutcome::Found(0, 0, 0)
        );
        assert!(matches!(
            brute_force_represent(&form(1, 1, 1), 7, &budget(100)),
            RepOutcome::Unknown { .. }
        ));
    }

    #[test]
    fn brute_force_slices_negative_minority() {
        // (+,-,-): slice the positive coordinate.
        let f = form(5, -1, -1);
        // 5*1 - 4 - 0 = 1
        let out = brute_force_represent(&f, 1, &budget(50));
        match out {
            RepOutcome::Found(y1, y2, y3) => assert_eq!(f.evaluate((y1, y2, y3)), 1),
            other => panic!("expected witness, got {other:?}"),
        }
    }

    #[test]
    fn represent_examples() {
        assert_eq!(
            represent(&form(2, 3, -6), 23, &budget(200)),
            RepOutcome::Found(1, 3, 1)
        );
        assert_eq!(
            represent(&form(1, 1, 1), -5, &budget(200)),
            RepOutcome::LocallyImpossible(Place::Infinity)
        );
        assert_eq!(
            represent(&form(2, 3, -6), 0, &budget(200)),
            RepOutcome::Found(0, 0, 0)
        );
        // 7 = 7 mod 8: dyadic obstruction for three squares.
        assert_eq!(
            represent(&form(1, 1, 1), 7, &budget(200)),
            RepOutcome::LocallyImpossible(Place::Prime(2))
        );
    }

    #[test]
    fn found_witnesses_verify_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..300 {
            let nonzero = |rng: &mut ChaCha8Rng| loop {
                let c = rng.gen_range(-8i64..=8);
                if c != 0 {
                    break c;
                }
            };
            let f = form(nonzero(&mut rng), nonzero(&mut rng), nonzero(&mut rng));
            let n = rng.gen_range(-300i64..=300);
            if let RepOutcome::Found(y1, y2, y3) = represent(&f, n, &budget(60)) {
                assert_eq!(f.evaluate((y1, y2, y3)), n as i128, "{f:?} n={n}");
            }
        }
    }

    #[test]
    fn local_impossible_never_contradicts_search() {
        // Acceptance-range check at reduced box: if the local screen rejects,
        // the unscreened scan must come up empty.
        let f = form(2, 3, -6);
        for n in -200i64..=200 {
            if let RepOutcome::LocallyImpossible(_) = represent(&f, n, &budget(200)) {
                assert!(
                    matches!(
                        brute_force_represent(&f, n, &budget(200)),
                        RepOutcome::Unknown { .. }
                    ),
                    "local obstruction for n = {n} but a witness exists"
                );
            }
        }
    }

    #[test]
    fn determinism() {
        let f = form(2, 3, -6);
        let b = budget(500);
        for n in [-50i64, 23, 47, 101] {
            assert_eq!(represent(&f, n, &b), represent(&f, n, &b));
        }
    }

    #[test]
    fn node_cap_reports_unknown() {
        let tiny = SearchBudget::new(10_000, 3).unwrap();
        assert!(matches!(
            brute_force_represent(&form(1, 1, 1), 9999999, &tiny),
            RepOutcome::Unknown { .. }
        ));
    }

    #[test]
    fn three_squares_examples() {
        assert!(!legendre_admissible(7));
        assert!(matches!(three_squares(7), RepOutcome::Unknown { .. }));
        assert_eq!(three_squares(0), RepOutcome::Found(0, 0, 0));
        assert!(legendre_admissible(2013));
        match three_squares(2013) {
            RepOutcome::Found(y1, y2, y3) => {
                assert_eq!(y1 * y1 + y2 * y2 + y3 * y3, 2013);
                assert!(y1 <= y2 && y2 <= y3);
            }
            other => panic!("2013 should be a sum of three squares, got {other:?}"),
        }
    }

    #[test]
    fn three_squares_matches_criterion_to_2000() {
        for n in 0u64..=2000 {
            assert_eq!(
                legendre_admissible(n),
                three_squares(n).is_found(),
                "n = {n}"
            );
        }
    }
}

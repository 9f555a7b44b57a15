//! Systole brackets for the surfaces X_q attached to Gamma(q).
//!
//! For odd prime levels q coprime to 2ab, every x in Gamma(q) other than
//! +-1 has x0 = 1 mod q^2, so |x0| >= q^2 - 1: a rigorous trace floor. For
//! the ceiling, elements with x0 = n q^2 + 1 and x_i = q y_i exist exactly
//! when the indefinite form a y1^2 + b y2^2 - ab y3^2 represents
//! n^2 q^2 + 2n; scanning candidates n by |x0| ascending and querying the
//! representation engine yields a certified upper bound together with the
//! list of smaller candidates the search could not decide.

use num::{BigInt, One, ToPrimitive};

use crate::arith::{gcd, is_prime, valuation};
use crate::congruence::{in_gamma_level, index_gamma, Level, OrderElement};
use crate::error::{Error, Result};
use crate::quaternion::QuaternionAlgebra;
use crate::ternary::{represent, RepOutcome, SearchBudget, TernaryForm};

/// Slope reference for the sharp growth constant.
pub const GAMMA_FOUR_THIRDS: f64 = 4.0 / 3.0;

/// Default number of trace candidates scanned before giving up.
pub const DEFAULT_MAX_CANDIDATES: usize = 40;

/// One small-trace candidate: x0 = n q^2 + 1 and the representation target
/// n^2 q^2 + 2n = (x0^2 - 1) / q^2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceCandidate {
    pub n: i64,
    pub x0: i64,
    pub target: i64,
}

impl TraceCandidate {
    pub fn new(n: i64, q: u64) -> Self {
        let q2 = (q as i128) * (q as i128);
        let x0 = (n as i128) * q2 + 1;
        let target = (n as i128) * (n as i128) * q2 + 2 * n as i128;
        let out = TraceCandidate {
            n,
            x0: i64::try_from(x0).expect("candidate x0 exceeds i64"),
            target: i64::try_from(target).expect("candidate target exceeds i64"),
        };
        debug_assert_eq!(
            (out.x0 as i128 * out.x0 as i128 - 1) % q2,
            0,
            "x0^2 - 1 must be divisible by q^2"
        );
        debug_assert_eq!((out.x0 as i128 * out.x0 as i128 - 1) / q2, out.target as i128);
        out
    }
}

/// Rigorous lower and certified upper trace data for sys(X_q).
#[derive(Debug, Clone)]
pub struct SystoleBracket {
    pub q: u64,
    /// 2 (q^2 - 1): no nontrivial element has smaller absolute trace.
    pub trace_lower: u64,
    /// Verified witness attaining `trace_upper`, when the search succeeded.
    pub witness: Option<OrderElement>,
    pub trace_upper: Option<u64>,
    /// True only if every candidate with smaller |x0| was decided
    /// (locally impossible); `Unknown` outcomes forbid exhaustiveness.
    pub exhaustive: bool,
    pub unresolved: Vec<TraceCandidate>,
}

impl SystoleBracket {
    /// Exact geodesic length floor 2 arccosh(q^2 - 1).
    pub fn sys_lower(&self) -> f64 {
        length_from_trace(self.trace_lower as f64).expect("trace floor is hyperbolic")
    }

    /// Exact geodesic length of the witness, 2 arccosh(|x0|).
    pub fn sys_upper(&self) -> Option<f64> {
        self.trace_upper
            .map(|t| length_from_trace(t as f64).expect("witness trace is hyperbolic"))
    }

    /// The convenience ceiling 2 log |Tr|, slightly weaker than `sys_upper`.
    pub fn sys_upper_trace_log(&self) -> Option<f64> {
        self.trace_upper.map(|t| 2.0 * (t as f64).ln())
    }
}

fn require_admissible(alg: &QuaternionAlgebra, q: u64) -> Result<()> {
    if !alg.is_fuchsian_input() {
        let reason = if !(alg.a > 0 || alg.b > 0) {
            "ramified at the real place".to_string()
        } else {
            "not a division algebra".to_string()
        };
        return Err(Error::NotFuchsian {
            a: alg.a,
            b: alg.b,
            reason,
        });
    }
    if q < 3 || !is_prime(q) {
        return Err(Error::OddPrimeRequired { q });
    }
    let two_ab = 2 * alg.a.unsigned_abs() * alg.b.unsigned_abs();
    if gcd(q, two_ab) != 1 {
        return Err(Error::LevelNotCoprime {
            q,
            two_ab: 2 * alg.a * alg.b,
        });
    }
    Ok(())
}

/// 2 (q^2 - 1) for odd primes q coprime to 2ab.
///
/// Any x in Gamma(q) with x != +-1 has x0 = 1 mod q and x0^2 = 1 mod q^2;
/// since x0 + 1 = 2 mod q is a unit, x0 = 1 mod q^2 and hence
/// |x0| >= q^2 - 1.
pub fn trace_lower_bound(alg: &QuaternionAlgebra, q: u64) -> Result<u64> {
    require_admissible(alg, q)?;
    Ok(2 * (q * q - 1))
}

/// Scan candidates n ordered by |n q^2 + 1| ascending (positive n first on
/// equal magnitude) and return the first verified witness together with the
/// undecided candidates below it.
pub fn minimal_trace_search(
    alg: &QuaternionAlgebra,
    q: u64,
    budget: &SearchBudget,
    max_candidates: usize,
) -> Result<SystoleBracket> {
    require_admissible(alg, q)?;
    let form = TernaryForm::new(alg.a, alg.b, -alg.a * alg.b)?;
    let trace_lower = 2 * (q * q - 1);

    let mut unresolved = Vec::new();
    let mut witness = None;
    let mut trace_upper = None;

    for idx in 0..max_candidates {
        // n sequence -1, 1, -2, 2, ...: |x0| = m q^2 - 1 < m q^2 + 1.
        let m = (idx / 2 + 1) as i64;
        let n = if idx % 2 == 0 { -m } else { m };
        let cand = TraceCandidate::new(n, q);
        match represent(&form, cand.target, budget) {
            RepOutcome::Found(y1, y2, y3) => {
                let qi = q as i64;
                let x = OrderElement::from_i64(cand.x0, qi * y1, qi * y2, qi * y3);
                assert!(
                    x.norm(alg).is_one() && in_gamma_level(alg, &x, q),
                    "witness must verify exactly"
                );
                trace_upper = Some(2 * cand.x0.unsigned_abs());
                witness = Some(x);
                break;
            }
            RepOutcome::LocallyImpossible(_) => {} // candidate decided: skip
            RepOutcome::Unknown { .. } => unresolved.push(cand),
        }
    }

    Ok(SystoleBracket {
        q,
        trace_lower,
        witness,
        trace_upper,
        exhaustive: unresolved.is_empty(),
        unresolved,
    })
}

/// True iff ord_{p0}(n^2 q^2 + 2n) = 1, which pins the target's squarefree
/// part away from any fixed square class; an optional filter for searches
/// stalling on Unknown.
pub fn spinor_avoidance_constraint(
    alg: &QuaternionAlgebra,
    n: i64,
    q: u64,
    p0: u64,
) -> Result<bool> {
    let two_abq = 2 * alg.a.unsigned_abs() * alg.b.unsigned_abs() * q;
    if !is_prime(p0) || two_abq % p0 == 0 {
        return Err(Error::BadAuxiliaryPrime { p0 });
    }
    if n == 0 {
        return Ok(false);
    }
    let q2 = (q as i128) * (q as i128);
    let second = (n as i128) * q2 + 2;
    let second = i64::try_from(second).expect("candidate exceeds i64");
    let total = valuation(n, p0).unwrap() + valuation(second, p0).unwrap_or(u32::MAX);
    Ok(total == 1)
}

/// Geodesic length of a hyperbolic trace: 2 arccosh(|t| / 2).
pub fn length_from_trace(t: f64) -> Result<f64> {
    if t.abs() <= 2.0 {
        return Err(Error::NonHyperbolicTrace { t });
    }
    Ok(2.0 * (t.abs() / 2.0).acosh())
}

/// One level of the growth survey.
#[derive(Debug, Clone)]
pub struct SurveyRow {
    pub q: u64,
    pub index: BigInt,
    pub log_index: f64,
    pub sys_lower: f64,
    pub sys_upper: Option<f64>,
    /// sys_upper - (4/3) log(index)
    pub defect: Option<f64>,
    pub exhaustive: bool,
}

#[derive(Debug, Clone)]
pub struct Survey {
    pub rows: Vec<SurveyRow>,
    /// Least-squares slope of defect against log q, when >= 2 rows have one.
    pub slope: Option<f64>,
}

impl Survey {
    /// (levels where the trace floor is attained, levels with a witness).
    pub fn attainment(&self) -> (usize, usize) {
        let with_witness = self.rows.iter().filter(|r| r.sys_upper.is_some()).count();
        let attained = self
            .rows
            .iter()
            .filter(|r| {
                r.sys_upper
                    .map(|u| (u - r.sys_lower).abs() < 1e-12)
                    .unwrap_or(false)
            })
            .count();
        (attained, with_witness)
    }
}

/// Run the full pipeline per level and fit the defect slope at gamma = 4/3.
pub fn survey(
    alg: &QuaternionAlgebra,
    q_list: &[u64],
    budget: &SearchBudget,
    max_candidates: usize,
) -> Result<Survey> {
    let mut rows = Vec::with_capacity(q_list.len());
    for &q in q_list {
        let bracket = minimal_trace_search(alg, q, budget, max_candidates)?;
        let index = index_gamma(alg, &Level::new(q)?)?.count;
        let log_index = index.to_f64().unwrap().ln();
        let sys_upper = bracket.sys_upper();
        rows.push(SurveyRow {
            q,
            index,
            log_index,
            sys_lower: bracket.sys_lower(),
            sys_upper,
            defect: sys_upper.map(|u| u - GAMMA_FOUR_THIRDS * log_index),
            exhaustive: bracket.exhaustive,
        });
    }
    let slope = defect_slope(&rows, GAMMA_FOUR_THIRDS);
    Ok(Survey { rows, slope })
}

/// Least-squares slope of (sys_upper - gamma log index) against log q over
/// the rows carrying an upper bound.
pub fn defect_slope(rows: &[SurveyRow], gamma: f64) -> Option<f64> {
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| {
            r.sys_upper
                .map(|u| ((r.q as f64).ln(), u - gamma * r.log_index))
        })
        .collect();
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points
        .iter()
        .map(|p| (p.0 - mean_x) * (p.1 - mean_y))
        .sum();
    if sxx == 0.0 {
        return None;
    }
    Some(sxy / sxx)
}

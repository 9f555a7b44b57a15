//! LPS-style Ramanujan Cayley graphs X^{p,q} and their girth.
//!
//! For a prime p = 1 mod 4 the p + 1 integer quadruples with
//! a0^2 + a1^2 + a2^2 + a3^2 = p, a0 > 0 odd and the rest even, map to
//! 2x2 matrices over Z/q via a square root of -1; the Cayley graph they
//! generate sits on PSL2(Z/q) when p is a quadratic residue mod q and on
//! all of PGL2(Z/q) (bipartite) otherwise. Girth is computed exactly by
//! truncated non-backtracking breadth-first search from every vertex.

use std::collections::HashMap;

use crate::arith::{is_prime, legendre_symbol, mod_inverse, mul_mod, sqrt_minus_one};
use crate::error::{Error, Result};

/// The p + 1 normalized quadruples of norm p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    pub p: u64,
    pub quads: Vec<[i64; 4]>,
}

/// Exhaustive search for all 4-square decompositions of p with a0 > 0 odd
/// and a1, a2, a3 even; for p = 1 mod 4 there are exactly p + 1 of them.
pub fn generator_set(p: u64) -> Result<GeneratorSet> {
    if !is_prime(p) || p % 4 != 1 {
        return Err(Error::BadGeneratorPrime { p });
    }
    let bound = (p as i64).isqrt();
    let evens: Vec<i64> = (-bound..=bound).filter(|v| v % 2 == 0).collect();
    let mut quads = Vec::new();
    for a0 in (1..=bound).step_by(2) {
        let r0 = p as i64 - a0 * a0;
        for &a1 in &evens {
            let r1 = r0 - a1 * a1;
            if r1 < 0 {
                continue;
            }
            for &a2 in &evens {
                let r2 = r1 - a2 * a2;
                if r2 < 0 {
                    continue;
                }
                let a3 = (r2 as u64).isqrt() as i64;
                if a3 * a3 == r2 && a3 % 2 == 0 {
                    quads.push([a0, a1, a2, a3]);
                    if a3 != 0 {
                        quads.push([a0, a1, a2, -a3]);
                    }
                }
            }
        }
    }
    quads.sort();
    quads.dedup();
    debug_assert_eq!(quads.len() as u64, p + 1);
    Ok(GeneratorSet { p, quads })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    Pgl2,
    Psl2,
}

impl GroupKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            GroupKind::Pgl2 => "PGL2",
            GroupKind::Psl2 => "PSL2",
        }
    }
}

/// Cayley graph of PGL2(Z/q) or PSL2(Z/q) with the norm-p generator set.
#[derive(Debug, Clone)]
pub struct LpsGraph {
    pub p: u64,
    pub q: u64,
    pub group: GroupKind,
    pub bipartite: bool,
    /// adjacency lists; (p+1)-regular
    pub adj: Vec<Vec<u32>>,
}

impl LpsGraph {
    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn degree(&self) -> usize {
        self.p as usize + 1
    }
}

/// Projective canonical form: scale so the first nonzero entry is 1.
fn canonical(m: [u64; 4], q: u64) -> [u64; 4] {
    let lead = if m[0] != 0 { m[0] } else { m[1] };
    debug_assert!(lead != 0, "singular matrix has no projective class");
    let inv = mod_inverse(lead, q).expect("leading entry is a unit");
    [
        mul_mod(m[0], inv, q),
        mul_mod(m[1], inv, q),
        mul_mod(m[2], inv, q),
        mul_mod(m[3], inv, q),
    ]
}

fn pack(m: [u64; 4], q: u64) -> u64 {
    ((m[0] * q + m[1]) * q + m[2]) * q + m[3]
}

fn mat_mul(x: [u64; 4], y: [u64; 4], q: u64) -> [u64; 4] {
    [
        (mul_mod(x[0], y[0], q) + mul_mod(x[1], y[2], q)) % q,
        (mul_mod(x[0], y[1], q) + mul_mod(x[1], y[3], q)) % q,
        (mul_mod(x[2], y[0], q) + mul_mod(x[3], y[2], q)) % q,
        (mul_mod(x[2], y[1], q) + mul_mod(x[3], y[3], q)) % q,
    ]
}

fn det(m: [u64; 4], q: u64) -> u64 {
    (mul_mod(m[0], m[3], q) + q - mul_mod(m[1], m[2], q)) % q
}

/// Build X^{p,q} for distinct primes p = q = 1 mod 4 with q > 2 sqrt(p):
/// map each quadruple (a0,a1,a2,a3) to
/// [[a0 + a1 i, a2 + a3 i], [-a2 + a3 i, a0 - a1 i]] mod q, where i^2 = -1,
/// then close under right multiplication starting from the identity.
pub fn build_graph(p: u64, q: u64) -> Result<LpsGraph> {
    if p == q {
        return Err(Error::BadGraphParams("p and q must be distinct".into()));
    }
    if !is_prime(q) || q % 4 != 1 {
        return Err(Error::BadGraphParams(format!(
            "q = {q} must be a prime congruent to 1 mod 4"
        )));
    }
    if (q as f64) <= 2.0 * (p as f64).sqrt() {
        return Err(Error::BadGraphParams(format!(
            "need q > 2 sqrt(p) for a simple graph (p = {p}, q = {q})"
        )));
    }
    let gens = generator_set(p)?;
    let iota = sqrt_minus_one(q).expect("q = 1 mod 4 has a root of -1");

    let reduce = |v: i64| v.rem_euclid(q as i64) as u64;
    let gen_mats: Vec<[u64; 4]> = gens
        .quads
        .iter()
        .map(|&[a0, a1, a2, a3]| {
            let m = [
                reduce(a0 + a1 * iota as i64),
                reduce(a2 + a3 * iota as i64),
                reduce(-a2 + a3 * iota as i64),
                reduce(a0 - a1 * iota as i64),
            ];
            debug_assert_eq!(det(m, q), p % q);
            canonical(m, q)
        })
        .collect();

    let group = if legendre_symbol(p as i64, q) == 1 {
        GroupKind::Psl2
    } else {
        GroupKind::Pgl2
    };
    let expected_order = match group {
        GroupKind::Pgl2 => q * (q * q - 1),
        GroupKind::Psl2 => q * (q * q - 1) / 2,
    };

    // Breadth-first closure from the identity: the generator set is
    // inverse-closed, so the reachable set is the generated subgroup.
    let identity = canonical([1, 0, 0, 1], q);
    let mut ids: HashMap<u64, u32> = HashMap::with_capacity(expected_order as usize);
    let mut mats: Vec<[u64; 4]> = Vec::with_capacity(expected_order as usize);
    let mut adj: Vec<Vec<u32>> = Vec::with_capacity(expected_order as usize);
    ids.insert(pack(identity, q), 0);
    mats.push(identity);
    adj.push(Vec::new());
    let mut head = 0usize;
    while head < mats.len() {
        let current = mats[head];
        let mut neighbors = Vec::with_capacity(gen_mats.len());
        for g in &gen_mats {
            let next = canonical(mat_mul(current, *g, q), q);
            let key = pack(next, q);
            let id = *ids.entry(key).or_insert_with(|| {
                mats.push(next);
                adj.push(Vec::new());
                (mats.len() - 1) as u32
            });
            neighbors.push(id);
        }
        // Simple graph check: distinct neighbors, no self-loop.
        neighbors.sort_unstable();
        let len_before = neighbors.len();
        neighbors.dedup();
        if neighbors.len() != len_before || neighbors.contains(&(head as u32)) {
            return Err(Error::BadGraphParams(format!(
                "multi-edge or loop at ({p},{q}); graph is not simple"
            )));
        }
        adj[head] = neighbors;
        head += 1;
    }

    if mats.len() as u64 != expected_order {
        return Err(Error::BadGraphParams(format!(
            "generated {} vertices, expected the {} group order {}",
            mats.len(),
            group.as_str(),
            expected_order
        )));
    }

    Ok(LpsGraph {
        p,
        q,
        group,
        bipartite: group == GroupKind::Pgl2,
        adj,
    })
}

/// Girth report for one graph.
#[derive(Debug, Clone, PartialEq)]
pub struct GirthReport {
    pub girth: u32,
    /// girth / log_p(vertex count)
    pub ratio: f64,
    /// 4 log_p q + log_p 4 + 2
    pub ceiling: f64,
}

/// Exact girth of a connected regular graph via per-root truncated BFS with
/// parent tracking; `None` for forests.
pub fn girth_of_adjacency(adj: &[Vec<u32>]) -> Option<u32> {
    let n = adj.len();
    let mut best = u32::MAX;
    let mut depth = vec![u32::MAX; n];
    let mut parent = vec![u32::MAX; n];
    let mut queue = Vec::with_capacity(n);
    for root in 0..n as u32 {
        depth.fill(u32::MAX);
        parent.fill(u32::MAX);
        queue.clear();
        queue.push(root);
        depth[root as usize] = 0;
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head];
            head += 1;
            let du = depth[u as usize];
            // Cycles through u have length >= 2 du: nothing left to improve.
            if 2 * du >= best {
                break;
            }
            for &w in &adj[u as usize] {
                if w == parent[u as usize] {
                    continue;
                }
                if depth[w as usize] == u32::MAX {
                    depth[w as usize] = du + 1;
                    parent[w as usize] = u;
                    queue.push(w);
                } else {
                    // Non-tree edge: closes a cycle through the root.
                    best = best.min(du + depth[w as usize] + 1);
                }
            }
        }
    }
    (best != u32::MAX).then_some(best)
}

/// Exact girth from a single root; used as a Cayley-symmetry cross-check.
pub fn girth_from_root(adj: &[Vec<u32>], root: u32) -> Option<u32> {
    let n = adj.len();
    let mut best = u32::MAX;
    let mut depth = vec![u32::MAX; n];
    let mut parent = vec![u32::MAX; n];
    let mut queue = vec![root];
    depth[root as usize] = 0;
    let mut head = 0;
    while head < queue.len() {
        let u = queue[head];
        head += 1;
        let du = depth[u as usize];
        if 2 * du >= best {
            break;
        }
        for &w in &adj[u as usize] {
            if w == parent[u as usize] {
                continue;
            }
            if depth[w as usize] == u32::MAX {
                depth[w as usize] = du + 1;
                parent[w as usize] = u;
                queue.push(w);
            } else {
                best = best.min(du + depth[w as usize] + 1);
            }
        }
    }
    (best != u32::MAX).then_some(best)
}

/// Girth plus the ratio and ceiling used in the growth comparison.
pub fn girth(graph: &LpsGraph) -> Result<GirthReport> {
    let g = girth_of_adjacency(&graph.adj)
        .ok_or_else(|| Error::BadGraphParams("acyclic graph has no girth".into()))?;
    let logp = |x: f64| x.ln() / (graph.p as f64).ln();
    Ok(GirthReport {
        girth: g,
        ratio: g as f64 / logp(graph.vertex_count() as f64),
        ceiling: 4.0 * logp(graph.q as f64) + logp(4.0) + 2.0,
    })
}

/// One survey row; inadmissible levels record why they were skipped.
#[derive(Debug, Clone)]
pub enum GirthSurveyRow {
    Computed {
        q: u64,
        vertices: usize,
        group: GroupKind,
        girth: u32,
        ratio: f64,
        ceiling: f64,
    },
    Skipped {
        q: u64,
        reason: String,
    },
}

/// Girth survey over candidate levels; levels failing the admissibility
/// preconditions are reported as skipped rather than aborting the run.
pub fn girth_survey(p: u64, q_list: &[u64]) -> Result<Vec<GirthSurveyRow>> {
    let mut rows = Vec::with_capacity(q_list.len());
    for &q in q_list {
        match build_graph(p, q) {
            Ok(graph) => {
                let report = girth(&graph)?;
                rows.push(GirthSurveyRow::Computed {
                    q,
                    vertices: graph.vertex_count(),
                    group: graph.group,
                    girth: report.girth,
                    ratio: report.ratio,
                    ceiling: report.ceiling,
                });
            }
            Err(e) => rows.push(GirthSurveyRow::Skipped {
                q,
                reason: e.to_string(),
            }),
        }
    }
    Ok(rows)
}

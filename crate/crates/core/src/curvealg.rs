//! Roots, branch-point clusters and genus bookkeeping for `ν² = R(λ)`.
//!
//! Polynomials are ascending coefficient slices throughout.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::C64;
use crate::spectral::CurvePolynomial;

pub const LEADING_FLOOR: f64 = 1e-12;
pub const CLUSTER_C: f64 = 50.0;
/// A merge is rejected when the linkage distance exceeds this multiple of the
/// larger child radius (unless both children are single roots).
pub const GAP_RATIO: f64 = 4.0;
const MAX_ITER: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchPointCluster {
    pub center: C64,
    pub multiplicity: usize,
    pub radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusReport {
    pub arithmetic_genus: usize,
    /// 0 when `reducible`.
    pub topological_genus: usize,
    pub reducible: bool,
    pub components: usize,
    pub odd_multiplicity_count: usize,
}

pub fn horner(coeffs: &[C64], z: C64) -> C64 {
    coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, a| acc * z + a)
}

fn horner_with_derivative(coeffs: &[C64], z: C64) -> (C64, C64) {
    let zero = C64::new(0.0, 0.0);
    coeffs
        .iter()
        .rev()
        .fold((zero, zero), |(p, dp), a| (p * z + a, dp * z + p))
}

/// Monic `Π (λ − z_i)`.
pub fn poly_from_roots(roots: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::new(1.0, 0.0)];
    for z in roots {
        let mut next = vec![C64::new(0.0, 0.0); out.len() + 1];
        for (k, a) in out.iter().enumerate() {
            next[k + 1] += a;
            next[k] -= a * z;
        }
        out = next;
    }
    out
}

/// Monic `Π (λ − center)^multiplicity`.
pub fn expand_clusters(clusters: &[BranchPointCluster]) -> Vec<C64> {
    let roots: Vec<C64> = clusters
        .iter()
        .flat_map(|c| std::iter::repeat_n(c.center, c.multiplicity))
        .collect();
    poly_from_roots(&roots)
}

fn lex_sort(v: &mut [C64]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// All complex roots, sorted lexicographically. Aberth iteration started on
/// the circle of radius `max_k |a_k|^{1/(n−k)}` about `−a_{n−1}/n` at angles
/// `2πk/n + 0.4`; companion-matrix eigenvalues if it stalls.
pub fn poly_roots(coeffs: &[C64]) -> Result<Vec<C64>> {
    let Some(lead) = coeffs.last().copied() else {
        return Err(Error::InvalidArgument("empty coefficient list".into()));
    };
    if lead.norm() <= LEADING_FLOOR {
        return Err(Error::DegenerateLeadingCoefficient(lead.norm()));
    }
    let a: Vec<C64> = coeffs.iter().map(|c| c / lead).collect();
    let n = a.len() - 1;
    let mut roots = match n {
        0 => vec![],
        1 => vec![-a[0]],
        _ => match aberth(&a) {
            Some(r) => r,
            None => companion_roots(&a)?,
        },
    };
    lex_sort(&mut roots);
    Ok(roots)
}

fn aberth(a: &[C64]) -> Option<Vec<C64>> {
    let n = a.len() - 1;
    let center = -a[n - 1] / n as f64;
    let radius = (0..n)
        .map(|k| a[k].norm().powf(1.0 / (n - k) as f64))
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut z: Vec<C64> = (0..n)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            center + C64::from_polar(radius, ang)
        })
        .collect();
    let mags: Vec<f64> = a.iter().map(|c| c.norm()).collect();
    let mut frozen = vec![false; n];
    for _ in 0..MAX_ITER {
        for i in 0..n {
            if frozen[i] {
                continue;
            }
            let (p, dp) = horner_with_derivative(a, z[i]);
            let bound =
                4.0 * n as f64 * f64::EPSILON * mags.iter().rev().fold(0.0, |acc, m| acc * z[i].norm() + m);
            if p.norm() <= bound {
                frozen[i] = true;
                continue;
            }
            let ratio = p / dp;
            let repulsion: C64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let step = ratio / (1.0 - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                return None;
            }
            z[i] -= step;
        }
        if frozen.iter().all(|f| *f) {
            return Some(z);
        }
    }
    None
}

/// Eigenvalues of the companion matrix of a monic polynomial.
pub(crate) fn companion_roots(a: &[C64]) -> Result<Vec<C64>> {
    let n = a.len() - 1;
    let mut m = DMatrix::<C64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = C64::new(1.0, 0.0);
    }
    for i in 0..n {
        m[(i, n - 1)] = -a[i];
    }
    let schur = m
        .try_schur(8.0 * f64::EPSILON, 10_000)
        .ok_or(Error::NoConvergence(10_000))?;
    let (_, t) = schur.unpack();
    Ok(t.diagonal().iter().copied().collect())
}

/// `C · ε^{1/m}`.
pub fn tau(m: usize, eps: f64) -> f64 {
    CLUSTER_C * eps.powf(1.0 / m as f64)
}

struct Context<'a> {
    roots: &'a [C64],
    eps: f64,
}

impl Context<'_> {
    fn cluster(&self, members: &[usize]) -> BranchPointCluster {
        let m = members.len();
        let center = members.iter().map(|&i| self.roots[i]).sum::<C64>() / m as f64;
        let radius = members
            .iter()
            .map(|&i| (self.roots[i] - center).norm())
            .fold(0.0, f64::max);
        BranchPointCluster {
            center,
            multiplicity: m,
            radius,
        }
    }

    /// Radius within `τ(m)`, and the last merge did not bridge a gap between
    /// two tight groups.
    fn consistent(&self, nodes: &[Node], at: usize) -> bool {
        let node = &nodes[at];
        let cl = self.cluster(&node.members);
        if cl.radius > tau(cl.multiplicity, self.eps) {
            return false;
        }
        let Some((l, r)) = node.children else {
            return true;
        };
        if nodes[l].members.len() == 1 && nodes[r].members.len() == 1 {
            return true;
        }
        let spread = self
            .cluster(&nodes[l].members)
            .radius
            .max(self.cluster(&nodes[r].members).radius);
        node.link <= GAP_RATIO * spread
    }
}

#[derive(Clone, Copy)]
enum Linkage {
    Single,
    Centroid,
}

struct Node {
    members: Vec<usize>,
    children: Option<(usize, usize)>,
    link: f64,
}

fn dendrogram(ctx: &Context, linkage: Linkage) -> (Vec<Node>, usize) {
    let n = ctx.roots.len();
    let mut nodes: Vec<Node> = (0..n)
        .map(|i| Node {
            members: vec![i],
            children: None,
            link: 0.0,
        })
        .collect();
    let mut active: Vec<usize> = (0..n).collect();
    while active.len() > 1 {
        let mut best: Option<(f64, usize, usize)> = None;
        for (ai, &x) in active.iter().enumerate() {
            for &y in &active[ai + 1..] {
                let d = match linkage {
                    Linkage::Single => nodes[x]
                        .members
                        .iter()
                        .flat_map(|&i| nodes[y].members.iter().map(move |&j| (i, j)))
                        .map(|(i, j)| (ctx.roots[i] - ctx.roots[j]).norm())
                        .fold(f64::INFINITY, f64::min),
                    Linkage::Centroid => {
                        (ctx.cluster(&nodes[x].members).center - ctx.cluster(&nodes[y].members).center).norm()
                    }
                };
                if best.is_none_or(|(bd, _, _)| d < bd) {
                    best = Some((d, x, y));
                }
            }
        }
        let (link, x, y) = best.expect("two active nodes");
        let mut members = nodes[x].members.clone();
        members.extend(&nodes[y].members);
        members.sort_unstable();
        nodes.push(Node {
            members,
            children: Some((x, y)),
            link,
        });
        active.retain(|&k| k != x && k != y);
        active.push(nodes.len() - 1);
    }
    let root = active[0];
    (nodes, root)
}

fn maximal_consistent(ctx: &Context, nodes: &[Node], at: usize, out: &mut Vec<Vec<usize>>) {
    if ctx.consistent(nodes, at) {
        out.push(nodes[at].members.clone());
        return;
    }
    let (l, r) = nodes[at].children.expect("leaves are always consistent");
    maximal_consistent(ctx, nodes, l, out);
    maximal_consistent(ctx, nodes, r, out);
}

fn partition(ctx: &Context, linkage: Linkage) -> Vec<Vec<usize>> {
    if ctx.roots.is_empty() {
        return vec![];
    }
    let (nodes, root) = dendrogram(ctx, linkage);
    let mut out = Vec::new();
    maximal_consistent(ctx, &nodes, root, &mut out);
    out.sort();
    out
}

/// [`cluster_branch_points_with_noise`] at `ε = 2⁻⁵²`.
pub fn cluster_branch_points(roots: &[C64], degree: usize) -> Result<Vec<BranchPointCluster>> {
    cluster_branch_points_with_noise(roots, degree, f64::EPSILON)
}

/// Groups roots into maximal consistent nodes of the merge tree at noise
/// level `eps`. Both single and centroid linkage are tried; differing
/// cluster counts are reported as ambiguous.
pub fn cluster_branch_points_with_noise(
    roots: &[C64],
    degree: usize,
    eps: f64,
) -> Result<Vec<BranchPointCluster>> {
    if roots.len() != degree {
        return Err(Error::InvalidArgument(format!(
            "{} roots for a degree {degree} polynomial",
            roots.len()
        )));
    }
    let mut sorted = roots.to_vec();
    lex_sort(&mut sorted);
    let ctx = Context {
        roots: &sorted,
        eps: eps.max(f64::EPSILON),
    };
    let single = partition(&ctx, Linkage::Single);
    let centroid = partition(&ctx, Linkage::Centroid);
    if single.len() != centroid.len() {
        return Err(Error::AmbiguousClustering(format!(
            "{} clusters by single linkage, {} by centroid linkage",
            single.len(),
            centroid.len()
        )));
    }
    let mut out: Vec<BranchPointCluster> = single.iter().map(|m| ctx.cluster(m)).collect();
    out.sort_by(|a, b| {
        a.center
            .re
            .total_cmp(&b.center.re)
            .then(a.center.im.total_cmp(&b.center.im))
    });
    Ok(out)
}

pub fn genera(clusters: &[BranchPointCluster]) -> Result<GenusReport> {
    let degree: usize = clusters.iter().map(|c| c.multiplicity).sum();
    if degree % 2 == 1 {
        return Err(Error::OddDegreeUnsupported(degree));
    }
    if degree < 2 {
        return Err(Error::InvalidArgument(format!(
            "curve degree {degree} is below 2"
        )));
    }
    let odd = clusters.iter().filter(|c| c.multiplicity % 2 == 1).count();
    let reducible = odd == 0;
    Ok(GenusReport {
        arithmetic_genus: (degree - 2) / 2,
        topological_genus: if reducible { 0 } else { odd / 2 - 1 },
        reducible,
        components: if reducible { 2 } else { 1 },
        odd_multiplicity_count: odd,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub distance: f64,
    pub pass: bool,
}

/// `max_m |a_m − b_m| / max(1, |a_m|, |b_m|)`.
pub fn coefficient_distance(computed: &[C64], expected: &[C64]) -> Result<f64> {
    if computed.len() != expected.len() {
        return Err(Error::DegreeMismatch(
            computed.len().saturating_sub(1),
            expected.len().saturating_sub(1),
        ));
    }
    Ok(computed
        .iter()
        .zip(expected)
        .map(|(a, b)| (a - b).norm() / a.norm().max(b.norm()).max(1.0))
        .fold(0.0, f64::max))
}

pub fn compare_curves(computed: &CurvePolynomial, expected: &[C64], rel_tol: f64) -> Result<Comparison> {
    let distance = coefficient_distance(&computed.coeffs, expected)?;
    Ok(Comparison {
        distance,
        pass: distance <= rel_tol,
    })
}

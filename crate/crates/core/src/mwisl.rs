//! Local maximum-weighted independent set of links (MWISL) solvers and the
//! calculators that size the partition.
//!
//! A local instance is the link set of one sub-square with queue-length
//! weights. A subset is admissible when every member's affectness from the
//! rest of the subset stays within the instance threshold (`1 - epsilon`), so
//! each admissible subset is a `1/(1 - epsilon)`-signal set.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};
use crate::geometry::LinkId;
use crate::interference::{at_most, network_i_max, PowerModel, Schedule, SinrModel, SinrParams};

pub const DEFAULT_ENUMERATION_CAP: usize = 20;
pub const ORACLE_CAP: usize = 15;

#[derive(Debug, Clone, PartialEq)]
pub struct LocalInstance {
    pub links: Vec<LinkId>,
    /// Queue lengths, parallel to `links`.
    pub weights: Vec<u64>,
    /// Maximum admissible affectness, `1 - epsilon`.
    pub threshold: f64,
}

impl LocalInstance {
    pub fn new(links: Vec<LinkId>, weights: Vec<u64>, threshold: f64) -> Result<Self> {
        if links.len() != weights.len() {
            return Err(Error::InvalidParams(format!(
                "{} links but {} weights",
                links.len(),
                weights.len()
            )));
        }
        if !(threshold > 0.0 && threshold < 1.0) {
            return Err(Error::InvalidParams(format!(
                "affectness threshold {threshold} must lie in (0, 1)"
            )));
        }
        Ok(Self {
            links,
            weights,
            threshold,
        })
    }

    /// Instance over `links`, weighted by a global queue vector.
    pub fn from_queues(links: &[LinkId], queues: &[u64], epsilon: f64) -> Result<Self> {
        Self::new(
            links.to_vec(),
            links.iter().map(|&l| queues[l]).collect(),
            1.0 - epsilon,
        )
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    /// `(link, weight)` pairs with positive weight, ascending by link id.
    fn positive(&self) -> Vec<(LinkId, u64)> {
        let mut v: Vec<_> = self
            .links
            .iter()
            .copied()
            .zip(self.weights.iter().copied())
            .filter(|&(_, w)| w > 0)
            .collect();
        v.sort_unstable();
        v
    }
}

/// The admissibility predicate shared by every solver and the oracle.
pub fn within_threshold(model: &SinrModel<'_>, set: &Schedule, threshold: f64) -> bool {
    set.iter()
        .all(|l| at_most(model.affectness(l, set), threshold))
}

/// `(weight, ids)` is better than the incumbent: heavier, or equally heavy
/// with a lexicographically smaller id list.
fn improves(weight: u64, ids: &[LinkId], best_weight: u64, best_ids: &[LinkId]) -> bool {
    weight > best_weight || (weight == best_weight && ids < best_ids)
}

/// Exact local MWISL by depth-first enumeration of admissible subsets.
///
/// Admissibility is downward closed, so any branch that becomes
/// inadmissible is cut. A branch is also cut once its weight plus all
/// remaining weight cannot reach the incumbent. Ties resolve to the
/// lexicographically smallest id set. Zero-weight links are never chosen.
pub fn enumerate_mwisl(
    model: &SinrModel<'_>,
    inst: &LocalInstance,
    cap: usize,
) -> Result<Schedule> {
    if inst.len() > cap {
        return Err(Error::InstanceTooLarge {
            size: inst.len(),
            cap,
        });
    }
    let cands = inst.positive();
    let n = cands.len();
    let rel: Vec<Vec<f64>> = cands
        .iter()
        .map(|&(src, _)| {
            cands
                .iter()
                .map(|&(dst, _)| model.relative_interference(src, dst))
                .collect()
        })
        .collect();
    let coeff: Vec<f64> = cands
        .iter()
        .map(|&(l, _)| model.affectness_coefficient(l))
        .collect();
    let mut suffix = vec![0u64; n + 1];
    for i in (0..n).rev() {
        suffix[i] = suffix[i + 1] + cands[i].1;
    }

    struct Search<'s> {
        rel: &'s [Vec<f64>],
        coeff: &'s [f64],
        weights: Vec<u64>,
        suffix: &'s [u64],
        threshold: f64,
        chosen: Vec<usize>,
        sums: Vec<f64>,
        best_weight: u64,
        best: Vec<usize>,
    }

    impl Search<'_> {
        fn visit(&mut self, idx: usize, weight: u64) {
            if weight + self.suffix[idx] < self.best_weight {
                return;
            }
            if idx == self.weights.len() {
                if improves(weight, &self.chosen, self.best_weight, &self.best) {
                    self.best_weight = weight;
                    self.best.clone_from(&self.chosen);
                }
                return;
            }
            // Include idx: its own sum accumulates over chosen members in
            // ascending order, as do the members' sums as links are appended.
            let mut own = 0.0;
            for &m in &self.chosen {
                own += self.rel[m][idx];
            }
            let fits = at_most(self.coeff[idx] * own, self.threshold)
                && self.chosen.iter().all(|&m| {
                    at_most(
                        self.coeff[m] * (self.sums[m] + self.rel[idx][m]),
                        self.threshold,
                    )
                });
            if fits {
                let saved: Vec<f64> = self.chosen.iter().map(|&m| self.sums[m]).collect();
                for k in 0..self.chosen.len() {
                    let m = self.chosen[k];
                    self.sums[m] += self.rel[idx][m];
                }
                self.sums[idx] = own;
                self.chosen.push(idx);
                self.visit(idx + 1, weight + self.weights[idx]);
                self.chosen.pop();
                for (k, &m) in self.chosen.iter().enumerate() {
                    self.sums[m] = saved[k];
                }
            }
            self.visit(idx + 1, weight);
        }
    }

    let mut search = Search {
        rel: &rel,
        coeff: &coeff,
        weights: cands.iter().map(|&(_, w)| w).collect(),
        suffix: &suffix,
        threshold: inst.threshold,
        chosen: Vec::with_capacity(n),
        sums: vec![0.0; n],
        best_weight: 0,
        best: Vec::new(),
    };
    search.visit(0, 0);
    Ok(search.best.iter().map(|&i| cands[i].0).collect())
}

/// Exhaustive reference solver: tries every subset of the positive-weight
/// links against [`within_threshold`].
pub fn brute_force_oracle(model: &SinrModel<'_>, inst: &LocalInstance) -> Result<(Schedule, u64)> {
    if inst.len() > ORACLE_CAP {
        return Err(Error::InstanceTooLarge {
            size: inst.len(),
            cap: ORACLE_CAP,
        });
    }
    let cands = inst.positive();
    let mut best_weight = 0u64;
    let mut best_ids: Vec<LinkId> = Vec::new();
    for mask in 0u32..(1u32 << cands.len()) {
        let set: Schedule = cands
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &(l, _))| l)
            .collect();
        if !within_threshold(model, &set, inst.threshold) {
            continue;
        }
        let weight: u64 = cands
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &(_, w))| w)
            .sum();
        let ids = set.ids();
        if improves(weight, &ids, best_weight, &best_ids) {
            best_weight = weight;
            best_ids = ids;
        }
    }
    Ok((best_ids.into_iter().collect(), best_weight))
}

/// Shortest-link-first greedy: scans positive-weight links by
/// nondecreasing length (ties by id) and keeps each one whose addition
/// leaves every chosen link within `threshold`.
///
/// Admissibility is downward closed and affectness only grows, so a link
/// rejected once stays rejected and the result is maximal.
pub fn shortest_first_isl(
    model: &SinrModel<'_>,
    links: &[LinkId],
    weights: &[u64],
    threshold: f64,
) -> Schedule {
    let net = model.network();
    let mut order: Vec<LinkId> = links
        .iter()
        .zip(weights)
        .filter(|&(_, &w)| w > 0)
        .map(|(&l, _)| l)
        .collect();
    order.sort_by(|&a, &b| {
        net.link(a)
            .length
            .total_cmp(&net.link(b).length)
            .then(a.cmp(&b))
    });
    let mut chosen = Schedule::new();
    for l in order {
        let trial = chosen.with(l);
        if within_threshold(model, &trial, threshold) {
            chosen = trial;
        }
    }
    chosen
}

/// Weight-class local solver for uniform power.
///
/// Phase I drops links with weight at most `w_max / n` (the heaviest link
/// always stays). Phase II buckets survivors into doubling classes
/// `[2^i w_min, 2^(i+1) w_min)` (the top class closed above, at least one
/// class), runs [`shortest_first_isl`] per class and keeps the heaviest
/// result.
pub fn weight_class_mwisl(model: &SinrModel<'_>, inst: &LocalInstance) -> Schedule {
    let n = inst.len() as u128;
    let Some(&w_max) = inst.weights.iter().max() else {
        return Schedule::new();
    };
    if w_max == 0 {
        return Schedule::new();
    }
    let survivors: Vec<(LinkId, u64)> = inst
        .links
        .iter()
        .copied()
        .zip(inst.weights.iter().copied())
        .filter(|&(_, w)| w > 0 && (u128::from(w) * n > u128::from(w_max) || w == w_max))
        .collect();
    let w_min = survivors
        .iter()
        .map(|&(_, w)| w)
        .min()
        .expect("w_max survives");

    let mut classes = 1u32;
    while u128::from(w_min) << classes < u128::from(w_max) {
        classes += 1;
    }
    let class_of = |w: u64| {
        let mut i = 0u32;
        while i + 1 < classes && u128::from(w_min) << (i + 1) <= u128::from(w) {
            i += 1;
        }
        i
    };
    let mut groups: Vec<(Vec<LinkId>, Vec<u64>)> = vec![Default::default(); classes as usize];
    for &(l, w) in &survivors {
        let g = &mut groups[class_of(w) as usize];
        g.0.push(l);
        g.1.push(w);
    }

    let weight_lookup = |s: &Schedule| -> u64 {
        s.iter()
            .map(|l| {
                survivors
                    .iter()
                    .find(|&&(id, _)| id == l)
                    .map_or(0, |&(_, w)| w)
            })
            .sum()
    };
    let mut best = Schedule::new();
    let mut best_weight = 0;
    for (links, weights) in &groups {
        let s = shortest_first_isl(model, links, weights, inst.threshold);
        let w = weight_lookup(&s);
        if w > best_weight {
            best_weight = w;
            best = s;
        }
    }
    best
}

/// Which sign of the `r` exponent the linear cardinality bound uses in its
/// noise term.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum NoiseExponent {
    /// `xi * r^(kappa - beta) / (c * eta)`, as derived from the SINR
    /// constraint of the shortest link.
    #[default]
    KappaMinusBeta,
    /// `xi * r^(beta - kappa) / (c * eta)`.
    BetaMinusKappa,
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!(
            "epsilon = {epsilon} must lie in (0, 1)"
        )))
    }
}

fn check_kappa(sp: &SinrParams) -> Result<()> {
    if sp.kappa > 2.0 {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!(
            "kappa = {} must exceed 2",
            sp.kappa
        )))
    }
}

fn linear_coeffs(pm: &PowerModel) -> Result<(f64, f64)> {
    match *pm {
        PowerModel::Linear { c, beta, .. } => Ok((c, beta)),
        PowerModel::Uniform { .. } => Err(Error::InvalidParams(
            "this bound applies to the linear power model".into(),
        )),
    }
}

/// Upper bound on the size of an admissible link set inside a square of
/// side `J * R`, linear power.
pub fn optsize_bound_linear(
    sp: &SinrParams,
    pm: &PowerModel,
    j: u32,
    epsilon: f64,
    exponent: NoiseExponent,
) -> Result<u64> {
    check_epsilon(epsilon)?;
    let (c, beta) = linear_coeffs(pm)?;
    let e = match exponent {
        NoiseExponent::KappaMinusBeta => sp.kappa - beta,
        NoiseExponent::BetaMinusKappa => beta - sp.kappa,
    };
    let bracket = 1.0 / sp.sigma - sp.xi * sp.r_min.powf(e) / (c * sp.eta);
    if bracket <= 0.0 {
        return Err(Error::DegenerateBound(format!(
            "noise term leaves no room for any link (bracket = {bracket})"
        )));
    }
    let diag = SQRT_2 * f64::from(j) * sp.r_max;
    Ok((diag.powf(sp.kappa) / (1.0 - epsilon) * bracket + 1.0).ceil() as u64)
}

/// Separation (in multiples of `R`) that caps outside interference at
/// `epsilon * I_max`, linear power, before rounding.
pub fn separation_margin_linear_raw(
    sp: &SinrParams,
    pm: &PowerModel,
    opt_ub: u64,
    epsilon: f64,
) -> Result<f64> {
    check_kappa(sp)?;
    check_epsilon(epsilon)?;
    let (c, beta) = linear_coeffs(pm)?;
    let i_max = network_i_max(sp, pm)?;
    let num = 2.0 * PI * c * sp.eta * sp.r_max.powf(beta - sp.kappa) * opt_ub as f64;
    Ok((num / ((sp.kappa - 2.0) * epsilon * i_max)).powf(1.0 / sp.kappa))
}

pub fn separation_margin_linear(
    sp: &SinrParams,
    pm: &PowerModel,
    opt_ub: u64,
    epsilon: f64,
) -> Result<u32> {
    separation_margin_linear_raw(sp, pm, opt_ub, epsilon).map(to_cells)
}

/// Size bound for the shortest-first greedy inside a `J * R` square, uniform
/// power.
pub fn optsize_bound_uniform(sp: &SinrParams, j: u32) -> Result<u64> {
    let rho = SQRT_2 * f64::from(j) * sp.r_max / sp.r_min;
    let value =
        (rho + 1.0).powf(sp.kappa) / sp.sigma * (1.0 - (sp.r_min / sp.r_max).powf(sp.kappa));
    if value <= 0.0 {
        return Err(Error::DegenerateBound(format!(
            "uniform cardinality bound is {value}; r = R collapses it"
        )));
    }
    Ok(value.ceil() as u64)
}

pub fn separation_margin_uniform_raw(
    sp: &SinrParams,
    power: f64,
    x_ub: u64,
    epsilon: f64,
) -> Result<f64> {
    check_kappa(sp)?;
    check_epsilon(epsilon)?;
    let i_max = network_i_max(sp, &PowerModel::Uniform { p: power })?;
    let num = 2.0 * PI * sp.eta * power * x_ub as f64;
    let den = (sp.kappa - 2.0) * epsilon * i_max * sp.r_max.powf(sp.kappa);
    Ok((num / den).powf(1.0 / sp.kappa))
}

pub fn separation_margin_uniform(
    sp: &SinrParams,
    power: f64,
    x_ub: u64,
    epsilon: f64,
) -> Result<u32> {
    separation_margin_uniform_raw(sp, power, x_ub, epsilon).map(to_cells)
}

fn to_cells(raw: f64) -> u32 {
    (raw.ceil() as u32).max(1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundReport {
    /// Cardinality bound for one sub-square's schedule.
    pub opt_size_ub: u64,
    /// Margin `M` in cells.
    pub margin_m: u32,
    /// Super-subSquare side `K` in cells.
    pub k: u32,
}

fn bound_for(
    sp: &SinrParams,
    pm: &PowerModel,
    j: u32,
    epsilon: f64,
    exponent: NoiseExponent,
) -> Result<(u64, u32)> {
    match *pm {
        PowerModel::Linear { .. } => {
            let ub = optsize_bound_linear(sp, pm, j, epsilon, exponent)?;
            Ok((ub, separation_margin_linear(sp, pm, ub, epsilon)?))
        }
        PowerModel::Uniform { p } => {
            let ub = optsize_bound_uniform(sp, j)?;
            Ok((ub, separation_margin_uniform(sp, p, ub, epsilon)?))
        }
    }
}

/// Smallest margin `M` whose guarantee covers the sub-square it leaves.
///
/// With `k` given, searches `M = 1, 2, ...` for the first value at least the
/// margin required by a sub-square of side `K - 2M`. Without `k`, sizes `M`
/// for a one-cell sub-square and sets `K = 2M + 1`.
pub fn auto_margin(
    sp: &SinrParams,
    pm: &PowerModel,
    epsilon: f64,
    k: Option<u32>,
    exponent: NoiseExponent,
) -> Result<BoundReport> {
    match k {
        None => {
            let (opt_size_ub, margin_m) = bound_for(sp, pm, 1, epsilon, exponent)?;
            Ok(BoundReport {
                opt_size_ub,
                margin_m,
                k: 2 * margin_m + 1,
            })
        }
        Some(k) => {
            let mut m = 1u32;
            while 2 * m < k {
                let (opt_size_ub, required) = bound_for(sp, pm, k - 2 * m, epsilon, exponent)?;
                if required <= m {
                    return Ok(BoundReport {
                        opt_size_ub,
                        margin_m: m,
                        k,
                    });
                }
                m += 1;
            }
            Err(Error::InvalidParams(format!(
                "no margin M with 2M < K = {k} satisfies the separation bound"
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::geometry::{NetworkTopology, Point2D};

    fn sp(eta: f64, kappa: f64, sigma: f64, xi: f64, r: f64, big_r: f64) -> SinrParams {
        SinrParams::new(eta, kappa, sigma, xi, r, big_r).unwrap()
    }

    fn lin(c: f64, beta: f64) -> PowerModel {
        PowerModel::Linear {
            c,
            beta,
            p_max: f64::MAX,
        }
    }

    #[test]
    fn linear_size_bound_examples() {
        let p = sp(1.0, 3.0, 1.0, 0.0, 1.0, 1.0);
        let b = optsize_bound_linear(&p, &lin(1.0, 1.0), 1, 0.5, NoiseExponent::default()).unwrap();
        assert_eq!(b, 7);
        // Zero noise: independent of r and of the exponent form.
        let p2 = sp(1.0, 3.0, 1.0, 0.0, 0.5f64.max(1.0), 1.0);
        let b2 = optsize_bound_linear(&p2, &lin(1.0, 1.0), 1, 0.5, NoiseExponent::BetaMinusKappa)
            .unwrap();
        assert_eq!(b2, (2.0 * SQRT_2 / 0.5 + 1.0f64).ceil() as u64);
        // Noise large enough to empty the bracket.
        let noisy = sp(1.0, 3.0, 1.0, 2.0, 1.0, 1.0);
        assert!(matches!(
            optsize_bound_linear(&noisy, &lin(1.0, 1.0), 1, 0.5, NoiseExponent::default()),
            Err(Error::DegenerateBound(_))
        ));
        assert!(optsize_bound_linear(
            &p,
            &PowerModel::Uniform { p: 1.0 },
            1,
            0.5,
            NoiseExponent::default()
        )
        .is_err());
    }

    #[test]
    fn exponent_forms_differ_when_r_is_not_one() {
        let p = sp(1.0, 3.0, 1.0, 0.01, 2.0, 4.0);
        let a = optsize_bound_linear(&p, &lin(1.0, 1.0), 2, 0.5, NoiseExponent::KappaMinusBeta)
            .unwrap();
        let b = optsize_bound_linear(&p, &lin(1.0, 1.0), 2, 0.5, NoiseExponent::BetaMinusKappa)
            .unwrap();
        assert!(
            a < b,
            "larger noise term gives the smaller bound: {a} vs {b}"
        );
    }

    #[test]
    fn linear_margin_example() {
        // c = eta = R = 1, beta = 1, kappa = 3, sigma = 2, xi = 0 -> I_max = 0.5.
        let p = sp(1.0, 3.0, 2.0, 0.0, 1.0, 1.0);
        let raw = separation_margin_linear_raw(&p, &lin(1.0, 1.0), 7, 0.5).unwrap();
        assert!((raw - (2.0 * PI * 7.0 / 0.25f64).powf(1.0 / 3.0)).abs() < 1e-12);
        assert!((raw - 5.604).abs() < 1e-3);
        assert_eq!(
            separation_margin_linear(&p, &lin(1.0, 1.0), 7, 0.5).unwrap(),
            6
        );
        let mut bad = p;
        bad.kappa = 2.0;
        assert!(separation_margin_linear(&bad, &lin(1.0, 1.0), 7, 0.5).is_err());
    }

    #[test]
    fn uniform_size_bound_examples() {
        let p = sp(1.0, 3.0, 1.0, 0.0, 1.0, 2.0);
        assert_eq!(optsize_bound_uniform(&p, 1).unwrap(), 50);
        let equal = sp(1.0, 3.0, 1.0, 0.0, 1.0, 1.0);
        assert!(matches!(
            optsize_bound_uniform(&equal, 1),
            Err(Error::DegenerateBound(_))
        ));
    }

    #[test]
    fn uniform_margin_example() {
        let p = sp(1.0, 3.0, 1.0, 0.1, 1.0, 1.0);
        let raw = separation_margin_uniform_raw(&p, 1.0, 50, 0.9).unwrap();
        assert!((raw - (100.0 * PI / 0.81f64).powf(1.0 / 3.0)).abs() < 1e-12);
        assert_eq!(separation_margin_uniform(&p, 1.0, 50, 0.9).unwrap(), 8);
    }

    #[test]
    fn margin_is_at_least_one() {
        let p = sp(1.0, 3.0, 1.0, 0.0, 1.0, 1.0);
        assert_eq!(separation_margin_uniform(&p, 1.0, 0, 0.9).unwrap(), 1);
    }

    #[test]
    fn auto_margin_is_self_consistent() {
        let p = sp(1.0, 3.0, 1.0, 1e-4, 1.0, 5.0);
        let pm = PowerModel::Linear {
            c: 1.0,
            beta: 2.0,
            p_max: 25.0,
        };
        let rep = auto_margin(&p, &pm, 0.8, None, NoiseExponent::default()).unwrap();
        assert_eq!(rep.k, 2 * rep.margin_m + 1);
        let ub = optsize_bound_linear(&p, &pm, 1, 0.8, NoiseExponent::default()).unwrap();
        assert_eq!(rep.opt_size_ub, ub);
        assert_eq!(
            rep.margin_m,
            separation_margin_linear(&p, &pm, ub, 0.8).unwrap()
        );

        let with_k = auto_margin(&p, &pm, 0.8, Some(rep.k + 10), NoiseExponent::default()).unwrap();
        let j = with_k.k - 2 * with_k.margin_m;
        let (_, need) = bound_for(&p, &pm, j, 0.8, NoiseExponent::default()).unwrap();
        assert!(need <= with_k.margin_m);
        if with_k.margin_m > 1 {
            let m = with_k.margin_m - 1;
            let (_, need) =
                bound_for(&p, &pm, with_k.k - 2 * m, 0.8, NoiseExponent::default()).unwrap();
            assert!(need > m);
        }
        assert!(auto_margin(&p, &pm, 0.8, Some(5), NoiseExponent::default()).is_err());
    }

    proptest! {
        #[test]
        fn bounds_are_monotone(kappa in 2.1f64..5.0, sigma in 0.5f64..4.0, j in 1u32..8,
                               eps in 0.05f64..0.95, d_eps in 0.0f64..0.04, ub in 1u64..10_000) {
            let p = sp(1.0, kappa, sigma, 0.0, 1.0, 1.5);
            let pm = lin(1.0, 1.0);
            let e = NoiseExponent::default();
            prop_assert!(optsize_bound_linear(&p, &pm, j, eps, e).unwrap()
                <= optsize_bound_linear(&p, &pm, j + 1, eps, e).unwrap());
            prop_assert!(optsize_bound_uniform(&p, j).unwrap() <= optsize_bound_uniform(&p, j + 1).unwrap());

            let base = separation_margin_linear_raw(&p, &pm, ub, eps).unwrap();
            let doubled = separation_margin_linear_raw(&p, &pm, 2 * ub, eps).unwrap();
            prop_assert!((doubled / base - 2f64.powf(1.0 / kappa)).abs() < 1e-9);

            let eps2 = (eps + d_eps).min(0.99);
            prop_assert!(separation_margin_linear_raw(&p, &pm, ub, eps2).unwrap() <= base * (1.0 + 1e-12));
            prop_assert!(separation_margin_uniform_raw(&p, 1.0, ub, eps2).unwrap()
                <= separation_margin_uniform_raw(&p, 1.0, ub, eps).unwrap() * (1.0 + 1e-12));
        }

        #[test]
        fn uniform_margin_is_scale_free(scale in 0.1f64..100.0, ub in 1u64..1000) {
            // Scaling P scales I_max by the same factor when xi = 0.
            let p = sp(1.0, 3.0, 1.0, 0.0, 1.0, 2.0);
            let a = separation_margin_uniform_raw(&p, 1.0, ub, 0.5).unwrap();
            let b = separation_margin_uniform_raw(&p, scale, ub, 0.5).unwrap();
            prop_assert!((a - b).abs() < 1e-9 * a);
        }
    }

    fn two_link_net(gap: f64) -> NetworkTopology {
        let nodes = vec![
            Point2D::new(0.0, 0.0),
            Point2D::new(1.0, 0.0),
            Point2D::new(1.0 + gap, 0.0),
            Point2D::new(1.0 + gap, 1.0),
        ];
        NetworkTopology::new(nodes, vec![(0, 1), (2, 3)], 1.0, 1.0).unwrap()
    }

    fn uniform_model(net: &NetworkTopology) -> SinrModel<'_> {
        SinrModel::new(
            net,
            PowerModel::Uniform { p: 1.0 },
            sp(1.0, 3.0, 1.0, 0.0, 1.0, 1.0),
        )
        .unwrap()
    }

    #[test]
    fn enumerate_small_cases() {
        let net = two_link_net(1.0);
        let m = uniform_model(&net);
        let one = LocalInstance::new(vec![0], vec![5], 0.5).unwrap();
        assert_eq!(enumerate_mwisl(&m, &one, 20).unwrap().ids(), vec![0]);
        // Gap 1: mutual affectness 1 > 0.5, so only the heavier link fits.
        let pair = LocalInstance::new(vec![0, 1], vec![3, 7], 0.5).unwrap();
        assert_eq!(enumerate_mwisl(&m, &pair, 20).unwrap().ids(), vec![1]);
        assert_eq!(
            brute_force_oracle(&m, &pair).unwrap(),
            (Schedule::from_iter([1]), 7)
        );
        // Ties go to the lexicographically smaller set.
        let tie = LocalInstance::new(vec![0, 1], vec![4, 4], 0.5).unwrap();
        assert_eq!(enumerate_mwisl(&m, &tie, 20).unwrap().ids(), vec![0]);
        assert_eq!(brute_force_oracle(&m, &tie).unwrap().0.ids(), vec![0]);
        // Zero weight is never scheduled.
        let zero = LocalInstance::new(vec![0], vec![0], 0.5).unwrap();
        assert!(enumerate_mwisl(&m, &zero, 20).unwrap().is_empty());
        let empty = LocalInstance::new(vec![], vec![], 0.5).unwrap();
        assert_eq!(
            brute_force_oracle(&m, &empty).unwrap(),
            (Schedule::new(), 0)
        );
        assert!(matches!(
            enumerate_mwisl(&m, &pair, 1),
            Err(Error::InstanceTooLarge { size: 2, cap: 1 })
        ));
    }

    #[test]
    fn instance_validation() {
        assert!(LocalInstance::new(vec![0], vec![], 0.5).is_err());
        assert!(LocalInstance::new(vec![0], vec![1], 1.0).is_err());
        assert!(LocalInstance::new(vec![0], vec![1], 0.0).is_err());
    }

    #[test]
    fn weight_class_phase_trace() {
        // Four far-apart links; weights {10, 20, 50, 100}: threshold 25
        // keeps {50, 100}, which share the single class [50, 100].
        let mut nodes = Vec::new();
        let mut pairs = Vec::new();
        for k in 0..4 {
            let x = 1000.0 * k as f64;
            nodes.push(Point2D::new(x, 0.0));
            nodes.push(Point2D::new(x + 1.0, 0.0));
            pairs.push((2 * k, 2 * k + 1));
        }
        let net = NetworkTopology::new(nodes, pairs, 1.0, 1.0).unwrap();
        let m = uniform_model(&net);
        let inst = LocalInstance::new(vec![0, 1, 2, 3], vec![10, 20, 50, 100], 0.5).unwrap();
        assert_eq!(weight_class_mwisl(&m, &inst).ids(), vec![2, 3]);
        // Equal weights: one class holding everything.
        let eq = LocalInstance::new(vec![0, 1, 2, 3], vec![9; 4], 0.5).unwrap();
        assert_eq!(weight_class_mwisl(&m, &eq).ids(), vec![0, 1, 2, 3]);
        // A single link survives its own Phase-I threshold.
        let single = LocalInstance::new(vec![2], vec![9], 0.5).unwrap();
        assert_eq!(weight_class_mwisl(&m, &single).ids(), vec![2]);
        let empty = LocalInstance::new(vec![], vec![], 0.5).unwrap();
        assert!(weight_class_mwisl(&m, &empty).is_empty());
        // Classes [1,2), [2,4), [4,8]: the heaviest class result wins.
        let spread = LocalInstance::new(vec![0, 1, 2, 3], vec![7, 3, 3, 3], 0.5).unwrap();
        assert_eq!(weight_class_mwisl(&m, &spread).ids(), vec![1, 2, 3]);
    }

    #[test]
    fn shortest_first_small_cases() {
        let far = two_link_net(100.0);
        let m = uniform_model(&far);
        assert_eq!(shortest_first_isl(&m, &[0], &[1], 0.5).ids(), vec![0]);
        assert_eq!(
            shortest_first_isl(&m, &[0, 1], &[1, 1], 0.5).ids(),
            vec![0, 1]
        );
    }

    pub(crate) fn random_cluster(rng: &mut ChaCha8Rng, n: usize, side: f64) -> NetworkTopology {
        let mut nodes = Vec::new();
        let mut pairs = Vec::new();
        for k in 0..n {
            let s = Point2D::new(rng.random_range(0.0..side), rng.random_range(0.0..side));
            let th: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            let len = rng.random_range(1.0..2.0);
            nodes.push(s);
            nodes.push(Point2D::new(s.x + len * th.cos(), s.y + len * th.sin()));
            pairs.push((2 * k, 2 * k + 1));
        }
        NetworkTopology::new(nodes, pairs, 1.0, 2.0).unwrap()
    }

    fn cluster_model(net: &NetworkTopology, linear: bool) -> SinrModel<'_> {
        let p = sp(1.0, 3.0, 1.0, 0.01, 1.0, 2.0);
        let pm = if linear {
            PowerModel::Linear {
                c: 1.0,
                beta: 2.0,
                p_max: 4.0,
            }
        } else {
            PowerModel::Uniform { p: 1.0 }
        };
        SinrModel::new(net, pm, p).unwrap()
    }

    #[test]
    fn enumeration_matches_oracle_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for round in 0..200 {
            let net = random_cluster(&mut rng, 10, 9.0);
            let m = cluster_model(&net, round % 2 == 0);
            let weights: Vec<u64> = (0..10).map(|_| rng.random_range(1..50)).collect();
            let eps = [0.3, 0.5, 0.8][round % 3];
            let inst = LocalInstance::new((0..10).collect(), weights, 1.0 - eps).unwrap();
            let got = enumerate_mwisl(&m, &inst, DEFAULT_ENUMERATION_CAP).unwrap();
            let (want, want_w) = brute_force_oracle(&m, &inst).unwrap();
            assert_eq!(got, want, "round {round}");
            let got_w: u64 = got.iter().map(|l| inst.weights[l]).sum();
            assert_eq!(got_w, want_w);
        }
    }

    #[test]
    fn shortest_first_is_maximal_and_signal() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let net = random_cluster(&mut rng, 8, 8.0);
            let m = cluster_model(&net, false);
            let links: Vec<LinkId> = (0..8).collect();
            let s = shortest_first_isl(&m, &links, &[1; 8], 0.4);
            assert!(m.is_p_signal(&s, 1.0 / 0.4));
            for l in links.iter().filter(|&&l| !s.contains(l)) {
                assert!(!within_threshold(&m, &s.with(*l), 0.4));
            }
        }
    }

    #[test]
    fn weight_class_output_is_signal_set() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let net = random_cluster(&mut rng, 12, 9.0);
            let m = cluster_model(&net, false);
            let weights: Vec<u64> = (0..12).map(|_| rng.random_range(1..200)).collect();
            let inst = LocalInstance::new((0..12).collect(), weights, 0.2).unwrap();
            let s = weight_class_mwisl(&m, &inst);
            assert!(!s.is_empty());
            assert!(m.is_p_signal(&s, 1.0 / 0.2));
        }
    }
}

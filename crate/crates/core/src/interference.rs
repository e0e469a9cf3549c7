//! SINR arithmetic under the physical interference model.
//!
//! A link `l = (u, v)` transmitting at power `P_l` delivers signal
//! `P_l * eta * |uv|^-kappa` at `v`; every other active sender `w` adds
//! `P_w * eta * |wv|^-kappa` of interference. The link succeeds when
//! `signal / (interference + xi) >= sigma`.
//!
//! Affectness rescales interference so that the SINR threshold sits at 1:
//! `a_S(l) = c_l * sum_{l* in S} I_{l*}^l / signal_l` with
//! `c_l = sigma / (1 - sigma * xi / signal_l)`. A set is p-signal when every
//! member's affectness is at most `1/p`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::geometry::{Link, LinkId, NetworkTopology, LENGTH_TOLERANCE};

/// Relative slack granted on the feasible side of every threshold test.
pub const FEASIBILITY_SLACK: f64 = 1e-9;

/// `value >= threshold`, up to [`FEASIBILITY_SLACK`].
pub fn at_least(value: f64, threshold: f64) -> bool {
    value >= threshold * (1.0 - FEASIBILITY_SLACK)
}

/// `value <= bound`, up to [`FEASIBILITY_SLACK`].
pub fn at_most(value: f64, bound: f64) -> bool {
    value <= bound * (1.0 + FEASIBILITY_SLACK)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinrParams {
    /// Reference loss factor.
    pub eta: f64,
    /// Path-loss exponent, strictly above 2.
    pub kappa: f64,
    /// SINR threshold.
    pub sigma: f64,
    /// Ambient noise power.
    pub xi: f64,
    /// Minimum link length `r`.
    pub r_min: f64,
    /// Maximum link length `R`.
    pub r_max: f64,
}

impl SinrParams {
    pub fn new(eta: f64, kappa: f64, sigma: f64, xi: f64, r_min: f64, r_max: f64) -> Result<Self> {
        let p = Self {
            eta,
            kappa,
            sigma,
            xi,
            r_min,
            r_max,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.eta, self.kappa, self.sigma, self.xi, self.r_min, self.r_max,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidParams(
                "SINR parameters must be finite".into(),
            ));
        }
        if self.kappa <= 2.0 {
            return Err(Error::InvalidParams(format!(
                "path-loss exponent kappa = {} must exceed 2",
                self.kappa
            )));
        }
        if self.eta <= 0.0 || self.sigma <= 0.0 || self.xi < 0.0 {
            return Err(Error::InvalidParams(
                "need eta > 0, sigma > 0 and xi >= 0".into(),
            ));
        }
        if !(self.r_min > 0.0 && self.r_min <= self.r_max) {
            return Err(Error::InvalidParams(format!(
                "need 0 < r = {} <= R = {}",
                self.r_min, self.r_max
            )));
        }
        if self.path_gain(self.r_min) > 1.0 {
            return Err(Error::InvalidParams(format!(
                "path gain eta * r^-kappa = {} exceeds 1",
                self.path_gain(self.r_min)
            )));
        }
        Ok(())
    }

    /// `eta * dist^-kappa`.
    pub fn path_gain(&self, dist: f64) -> f64 {
        self.eta * dist.powf(-self.kappa)
    }

    /// Largest length at which a link with power `power` meets `sigma`
    /// against noise alone.
    pub fn max_transmission_radius(&self, power: f64) -> f64 {
        (self.eta * power / (self.sigma * self.xi)).powf(1.0 / self.kappa)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PowerModel {
    /// `P_l = c * len^beta`, capped by `p_max`.
    Linear { c: f64, beta: f64, p_max: f64 },
    /// Every link transmits at `p`.
    Uniform { p: f64 },
}

impl PowerModel {
    pub fn validate(&self, sp: &SinrParams) -> Result<()> {
        match *self {
            PowerModel::Linear { c, beta, p_max } => {
                if !(c > 0.0 && beta > 0.0 && beta < sp.kappa && p_max.is_finite()) {
                    return Err(Error::InvalidParams(format!(
                        "linear power needs c > 0 and 0 < beta < kappa, got c = {c}, beta = {beta}"
                    )));
                }
                if c * sp.r_max.powf(beta) > p_max * (1.0 + FEASIBILITY_SLACK) {
                    return Err(Error::InvalidParams(format!(
                        "c * R^beta = {} exceeds the power cap {p_max}",
                        c * sp.r_max.powf(beta)
                    )));
                }
            }
            PowerModel::Uniform { p } => {
                if !(p > 0.0 && p.is_finite()) {
                    return Err(Error::InvalidParams(format!(
                        "uniform power {p} must be positive"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn power_at_length(&self, len: f64) -> f64 {
        match *self {
            PowerModel::Linear { c, beta, .. } => c * len.powf(beta),
            PowerModel::Uniform { p } => p,
        }
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self, PowerModel::Uniform { .. })
    }
}

pub fn transmit_power(link: &Link, pm: &PowerModel) -> f64 {
    pm.power_at_length(link.length)
}

/// `c_l = sigma / (1 - sigma * xi / signal)`; `None` when the link cannot
/// meet `sigma` even without interference.
pub fn affectness_coefficient(signal: f64, sp: &SinrParams) -> Option<f64> {
    let slack = 1.0 - sp.sigma * sp.xi / signal;
    (slack > 0.0).then(|| sp.sigma / slack)
}

/// Interference a link of length `len` tolerates: `P * eta * len^-kappa / sigma - xi`.
pub fn tolerable_interference(sp: &SinrParams, pm: &PowerModel, len: f64) -> Result<f64> {
    let signal = pm.power_at_length(len) * sp.path_gain(len);
    let value = signal / sp.sigma - sp.xi;
    if value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParams(format!(
            "a link of length {len} tolerates no interference (I_max = {value}); it is at or beyond the maximum transmission radius"
        )))
    }
}

/// `I_max`: the interference budget of a length-`R` link.
pub fn network_i_max(sp: &SinrParams, pm: &PowerModel) -> Result<f64> {
    tolerable_interference(sp, pm, sp.r_max)
}

/// The 0/1 activation vector of one slot, held as a sorted id set.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Schedule {
    active: BTreeSet<LinkId>,
}

impl Schedule {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains(&self, l: LinkId) -> bool {
        self.active.contains(&l)
    }

    pub fn insert(&mut self, l: LinkId) -> bool {
        self.active.insert(l)
    }

    pub fn remove(&mut self, l: LinkId) -> bool {
        self.active.remove(&l)
    }

    pub fn len(&self) -> usize {
        self.active.len()
    }

    pub fn is_empty(&self) -> bool {
        self.active.is_empty()
    }

    /// Ascending link ids.
    pub fn iter(&self) -> impl Iterator<Item = LinkId> + '_ {
        self.active.iter().copied()
    }

    pub fn ids(&self) -> Vec<LinkId> {
        self.iter().collect()
    }

    pub fn with(&self, l: LinkId) -> Schedule {
        let mut s = self.clone();
        s.insert(l);
        s
    }

    pub fn union(&self, other: &Schedule) -> Schedule {
        self.active.union(&other.active).copied().collect()
    }

    pub fn extend(&mut self, other: &Schedule) {
        self.active.extend(other.iter());
    }

    pub fn is_disjoint(&self, other: &Schedule) -> bool {
        self.active.is_disjoint(&other.active)
    }
}

impl FromIterator<LinkId> for Schedule {
    fn from_iter<I: IntoIterator<Item = LinkId>>(iter: I) -> Self {
        Self {
            active: iter.into_iter().collect(),
        }
    }
}

impl<'s> IntoIterator for &'s Schedule {
    type Item = LinkId;
    type IntoIter = std::iter::Copied<std::collections::btree_set::Iter<'s, LinkId>>;

    fn into_iter(self) -> Self::IntoIter {
        self.active.iter().copied()
    }
}

/// Precomputed powers and pairwise gains for one topology.
///
/// Construction rejects links that cannot meet `sigma` on their own, so every
/// affectness coefficient and tolerable-interference value is well defined.
#[derive(Debug, Clone)]
pub struct SinrModel<'a> {
    net: &'a NetworkTopology,
    params: SinrParams,
    power: PowerModel,
    powers: Vec<f64>,
    signal: Vec<f64>,
    /// `cross[src * n + dst]`: interference from `src`'s sender at `dst`'s receiver.
    cross: Vec<f64>,
    coeff: Vec<f64>,
    i_max_link: Vec<f64>,
    i_max: f64,
}

impl<'a> SinrModel<'a> {
    pub fn new(net: &'a NetworkTopology, power: PowerModel, params: SinrParams) -> Result<Self> {
        params.validate()?;
        power.validate(&params)?;
        let i_max = network_i_max(&params, &power)?;
        let n = net.num_links();
        let links = net.links();
        let mut powers = Vec::with_capacity(n);
        let mut signal = Vec::with_capacity(n);
        let mut coeff = Vec::with_capacity(n);
        let mut i_max_link = Vec::with_capacity(n);
        for link in links {
            if link.length < params.r_min * (1.0 - LENGTH_TOLERANCE)
                || link.length > params.r_max * (1.0 + LENGTH_TOLERANCE)
            {
                return Err(Error::LinkLengthOutOfRange {
                    link: link.id,
                    length: link.length,
                    r_min: params.r_min,
                    r_max: params.r_max,
                });
            }
            let p = transmit_power(link, &power);
            let s = p * params.path_gain(link.length);
            let c = affectness_coefficient(s, &params).ok_or(Error::NonSchedulableLink {
                link: link.id,
                signal: s,
                required: params.sigma * params.xi,
            })?;
            powers.push(p);
            signal.push(s);
            coeff.push(c);
            i_max_link.push(s / params.sigma - params.xi);
        }
        let mut cross = vec![0.0; n * n];
        for src in links {
            for dst in links {
                if src.id != dst.id {
                    cross[src.id * n + dst.id] =
                        powers[src.id] * params.path_gain(src.sender.distance(&dst.receiver));
                }
            }
        }
        Ok(Self {
            net,
            params,
            power,
            powers,
            signal,
            cross,
            coeff,
            i_max_link,
            i_max,
        })
    }

    pub fn network(&self) -> &'a NetworkTopology {
        self.net
    }

    pub fn params(&self) -> &SinrParams {
        &self.params
    }

    pub fn power_model(&self) -> &PowerModel {
        &self.power
    }

    pub fn num_links(&self) -> usize {
        self.net.num_links()
    }

    pub fn power(&self, l: LinkId) -> f64 {
        self.powers[l]
    }

    /// Received signal power `P_l * eta * len^-kappa`.
    pub fn signal(&self, l: LinkId) -> f64 {
        self.signal[l]
    }

    /// Interference the sender of `src` causes at the receiver of `dst`.
    pub fn interference_from(&self, src: LinkId, dst: LinkId) -> f64 {
        self.cross[src * self.num_links() + dst]
    }

    /// Cumulative interference at `l`'s receiver from the links in `others`
    /// (`l` itself is skipped). Summed in ascending link-id order.
    pub fn interference_at(&self, l: LinkId, others: &Schedule) -> f64 {
        others
            .iter()
            .filter(|&o| o != l)
            .map(|o| self.interference_from(o, l))
            .fold(0.0, |acc, x| acc + x)
    }

    pub fn sinr_of(&self, l: LinkId, others: &Schedule) -> f64 {
        self.signal[l] / (self.interference_at(l, others) + self.params.xi)
    }

    /// Every member of `s` meets `sigma` against the rest of `s`.
    pub fn is_feasible(&self, s: &Schedule) -> bool {
        s.iter()
            .all(|l| at_least(self.sinr_of(l, s), self.params.sigma))
    }

    /// `r_{l*}(l)`: interference from `l_star` over `l`'s signal; zero when
    /// `l_star == l`.
    pub fn relative_interference(&self, l_star: LinkId, l: LinkId) -> f64 {
        if l_star == l {
            0.0
        } else {
            self.interference_from(l_star, l) / self.signal[l]
        }
    }

    pub fn affectness_coefficient(&self, l: LinkId) -> f64 {
        self.coeff[l]
    }

    /// `a_S(l)`; `l` itself contributes nothing.
    pub fn affectness(&self, l: LinkId, s: &Schedule) -> f64 {
        let sum = s
            .iter()
            .map(|o| self.relative_interference(o, l))
            .fold(0.0, |acc, x| acc + x);
        self.coeff[l] * sum
    }

    /// Every member's affectness from the rest of `s` is at most `1/p`.
    pub fn is_p_signal(&self, s: &Schedule, p: f64) -> bool {
        debug_assert!(p >= 1.0, "p-signal sets need p >= 1");
        let bound = 1.0 / p;
        s.iter().all(|l| at_most(self.affectness(l, s), bound))
    }

    /// First-fit split of a p-signal set into p'-signal bins.
    ///
    /// Links are placed heaviest first (ties by id); each goes into the first
    /// bin that stays p'-signal with it added.
    pub fn refine_to_p_signal(
        &self,
        s: &Schedule,
        weights: &[u64],
        p: f64,
        p_prime: f64,
    ) -> Result<Vec<Schedule>> {
        if !(p >= 1.0 && p_prime > p) {
            return Err(Error::InvalidParams(format!(
                "refinement needs 1 <= p < p', got p = {p}, p' = {p_prime}"
            )));
        }
        let mut order = s.ids();
        order.sort_by(|&a, &b| weights[b].cmp(&weights[a]).then(a.cmp(&b)));
        let mut bins: Vec<Schedule> = Vec::new();
        for l in order {
            match bins
                .iter_mut()
                .find(|bin| self.is_p_signal(&bin.with(l), p_prime))
            {
                Some(bin) => {
                    bin.insert(l);
                }
                None => bins.push(Schedule::from_iter([l])),
            }
        }
        Ok(bins)
    }

    /// `I_max^l = signal_l / sigma - xi`.
    pub fn max_tolerable_interference(&self, l: LinkId) -> f64 {
        self.i_max_link[l]
    }

    /// `I_max` of a length-`R` link under this power model.
    pub fn network_i_max(&self) -> f64 {
        self.i_max
    }
}

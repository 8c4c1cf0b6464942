//! Exact stochastic simulation of motile and proliferative agents on a
//! periodic square lattice with volume exclusion and a fixed cell-cycle delay.
//!
//! Motile agents move to a random neighbour at `motility_rate` and switch to
//! the proliferative phenotype at `switch_rate`. A proliferative agent
//! completes its cycle exactly `cycle_delay` after switching, places a motile
//! daughter on a random neighbour if that site is empty, and reverts to motile.

use std::collections::VecDeque;
use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Master seed used when none is supplied.
pub const DEFAULT_SEED: u64 = 0x5e_ed0f_9060;

const NONE: usize = usize::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LatticeParams {
    /// Lattice dimension, 1 to 3.
    pub n_dims: usize,
    /// Sites per dimension.
    pub side: usize,
    /// Lattice spacing; densities are per site, so this is bookkeeping only.
    pub spacing: f64,
    /// Probability that a site is initially occupied by a motile agent.
    pub seeding: f64,
    pub switch_rate: f64,
    pub cycle_delay: f64,
    pub motility_rate: f64,
}

impl Default for LatticeParams {
    fn default() -> Self {
        Self {
            n_dims: 2,
            side: 100,
            spacing: 1.0,
            seeding: 0.05,
            switch_rate: 1.0,
            cycle_delay: 1.0,
            motility_rate: 10.0,
        }
    }
}

impl LatticeParams {
    pub fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.n_dims) {
            return Err(invalid(format!("n_dims must be 1, 2 or 3, got {}", self.n_dims)));
        }
        if self.side < 2 {
            return Err(invalid(format!("side must be at least 2, got {}", self.side)));
        }
        if self.side.checked_pow(self.n_dims as u32).is_none_or(|k| k > 1 << 28) {
            return Err(invalid("lattice too large"));
        }
        if !(self.spacing.is_finite() && self.spacing > 0.0) {
            return Err(invalid("spacing must be positive"));
        }
        if !(0.0..=1.0).contains(&self.seeding) {
            return Err(invalid(format!("seeding must lie in [0, 1], got {}", self.seeding)));
        }
        let pos = |v: f64| v.is_finite() && v > 0.0;
        if !pos(self.switch_rate) || !pos(self.cycle_delay) {
            return Err(invalid("switch_rate and cycle_delay must be positive"));
        }
        if !(self.motility_rate.is_finite() && self.motility_rate >= 0.0) {
            return Err(invalid("motility_rate must be non-negative"));
        }
        Ok(())
    }

    /// Number of sites `K = side^n_dims`.
    pub fn capacity(&self) -> usize {
        self.side.pow(self.n_dims as u32)
    }

    /// Parses a flat `key = value` file whose keys are the field names.
    pub fn from_config_str(text: &str) -> Result<Self> {
        let lp: Self = toml::from_str(text).map_err(|e| invalid(format!("lattice config: {e}")))?;
        lp.validate()?;
        Ok(lp)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Site {
    Empty,
    Motile,
    Proliferative,
}

/// Random generator for run `stream` under `master_seed`.
pub fn run_rng(master_seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone)]
pub struct AbmState {
    params: LatticeParams,
    occupancy: Vec<Site>,
    /// Sites of motile agents.
    motile: Vec<usize>,
    /// Position of each site in `motile`, or `NONE`.
    motile_slot: Vec<usize>,
    /// `(completion_time, site)` in increasing time.
    queue: VecDeque<(f64, usize)>,
    t: f64,
    rng: ChaCha8Rng,
}

impl AbmState {
    /// Seeds each site independently with probability `seeding`.
    pub fn init(params: LatticeParams, master_seed: u64, stream: u64) -> Result<Self> {
        params.validate()?;
        let k = params.capacity();
        let mut state = Self {
            params,
            occupancy: vec![Site::Empty; k],
            motile: Vec::new(),
            motile_slot: vec![NONE; k],
            queue: VecDeque::new(),
            t: 0.0,
            rng: run_rng(master_seed, stream),
        };
        for site in 0..k {
            if state.rng.gen_bool(params.seeding) {
                state.occupancy[site] = Site::Motile;
                state.add_motile(site);
            }
        }
        Ok(state)
    }

    pub fn params(&self) -> &LatticeParams {
        &self.params
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn occupancy(&self) -> &[Site] {
        &self.occupancy
    }

    pub fn num_motile(&self) -> usize {
        self.motile.len()
    }

    pub fn num_proliferative(&self) -> usize {
        self.queue.len()
    }

    pub fn queue(&self) -> impl Iterator<Item = (f64, usize)> + '_ {
        self.queue.iter().copied()
    }

    fn add_motile(&mut self, site: usize) {
        self.motile_slot[site] = self.motile.len();
        self.motile.push(site);
    }

    fn remove_motile(&mut self, slot: usize) {
        let site = self.motile.swap_remove(slot);
        self.motile_slot[site] = NONE;
        if let Some(&moved) = self.motile.get(slot) {
            self.motile_slot[moved] = slot;
        }
    }

    fn random_neighbour(&mut self, site: usize) -> usize {
        let side = self.params.side;
        let dir = self.rng.gen_range(0..2 * self.params.n_dims);
        let stride = side.pow((dir / 2) as u32);
        let coord = (site / stride) % side;
        if dir % 2 == 0 {
            if coord + 1 == side {
                site - (side - 1) * stride
            } else {
                site + stride
            }
        } else if coord == 0 {
            site + (side - 1) * stride
        } else {
            site - stride
        }
    }

    fn densities(&self) -> (f64, f64) {
        let k = self.params.capacity() as f64;
        (self.motile.len() as f64 / k, self.queue.len() as f64 / k)
    }

    /// Advances to `t_end`, recording densities at `t0 + i * record_dt`.
    pub fn run(&mut self, t_end: f64, record_dt: f64) -> Result<DensitySeries> {
        if !(t_end.is_finite() && t_end > self.t) {
            return Err(invalid(format!("t_end must exceed the current time {}", self.t)));
        }
        if !(record_dt.is_finite() && record_dt > 0.0) {
            return Err(invalid("record_dt must be positive"));
        }
        let t0 = self.t;
        let records = ((t_end - t0) / record_dt + 1e-9).floor() as usize + 1;
        let mut series = DensitySeries::with_capacity(records);
        let mut next = 0usize;
        let rate_per_agent = self.params.motility_rate + self.params.switch_rate;
        let move_prob = self.params.motility_rate / rate_per_agent;

        while next < records {
            let total = rate_per_agent * self.motile.len() as f64;
            let t_markov = if total > 0.0 {
                let e: f64 = self.rng.sample(Exp1);
                self.t + e / total
            } else {
                f64::INFINITY
            };
            let t_queue = self.queue.front().map_or(f64::INFINITY, |e| e.0);
            let t_next = t_markov.min(t_queue);
            while next < records {
                let tr = t0 + next as f64 * record_dt;
                if tr >= t_next {
                    break;
                }
                let (m, p) = self.densities();
                series.push(tr, m, p);
                next += 1;
            }
            if next == records {
                break;
            }
            self.t = t_next;
            if t_queue <= t_markov {
                self.complete_division();
            } else {
                self.markov_event(move_prob);
            }
        }
        self.t = self.t.max(t_end);
        Ok(series)
    }

    fn complete_division(&mut self) {
        let (_, site) = self.queue.pop_front().expect("division queue is non-empty");
        debug_assert_eq!(self.occupancy[site], Site::Proliferative);
        self.occupancy[site] = Site::Motile;
        self.add_motile(site);
        let target = self.random_neighbour(site);
        if self.occupancy[target] == Site::Empty {
            self.occupancy[target] = Site::Motile;
            self.add_motile(target);
        }
    }

    fn markov_event(&mut self, move_prob: f64) {
        let slot = self.rng.gen_range(0..self.motile.len());
        let site = self.motile[slot];
        debug_assert_eq!(self.occupancy[site], Site::Motile);
        if self.rng.gen::<f64>() < move_prob {
            let target = self.random_neighbour(site);
            if self.occupancy[target] == Site::Empty {
                self.occupancy[site] = Site::Empty;
                self.occupancy[target] = Site::Motile;
                self.motile_slot[site] = NONE;
                self.motile_slot[target] = slot;
                self.motile[slot] = target;
            }
        } else {
            self.remove_motile(slot);
            self.occupancy[site] = Site::Proliferative;
            self.queue.push_back((self.t + self.params.cycle_delay, site));
        }
    }

    /// Checks that the bookkeeping structures agree with the occupancy.
    pub fn check_consistency(&self) -> std::result::Result<(), String> {
        let tally = |kind| self.occupancy.iter().filter(|&&s| s == kind).count();
        if tally(Site::Motile) != self.motile.len() {
            return Err("motile count differs from occupancy".into());
        }
        if tally(Site::Proliferative) != self.queue.len() {
            return Err("proliferative count differs from queue length".into());
        }
        for (slot, &site) in self.motile.iter().enumerate() {
            if self.occupancy[site] != Site::Motile || self.motile_slot[site] != slot {
                return Err(format!("motile index broken at site {site}"));
            }
        }
        let mut prev = f64::NEG_INFINITY;
        for &(time, site) in &self.queue {
            if self.occupancy[site] != Site::Proliferative {
                return Err(format!("queued site {site} is not proliferative"));
            }
            if time < prev || time < self.t || time > self.t + self.params.cycle_delay {
                return Err(format!("queue time {time} out of order at t = {}", self.t));
            }
            prev = time;
        }
        Ok(())
    }
}

/// Motile and proliferative densities per site at the recording times.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct DensitySeries {
    pub times: Vec<f64>,
    pub m: Vec<f64>,
    pub p: Vec<f64>,
}

impl DensitySeries {
    fn with_capacity(n: usize) -> Self {
        Self { times: Vec::with_capacity(n), m: Vec::with_capacity(n), p: Vec::with_capacity(n) }
    }

    fn push(&mut self, t: f64, m: f64, p: f64) {
        self.times.push(t);
        self.m.push(m);
        self.p.push(p);
    }

    pub fn total(&self) -> Vec<f64> {
        self.m.iter().zip(&self.p).map(|(m, p)| m + p).collect()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "t,m_density,p_density,total_density")?;
        for i in 0..self.times.len() {
            let (m, p) = (self.m[i], self.p[i]);
            writeln!(out, "{:.16e},{m:.16e},{p:.16e},{:.16e}", self.times[i], m + p)?;
        }
        Ok(())
    }
}

/// Pointwise mean and sample standard deviation over an ensemble.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleSeries {
    pub times: Vec<f64>,
    pub m_mean: Vec<f64>,
    pub m_std: Vec<f64>,
    pub p_mean: Vec<f64>,
    pub p_std: Vec<f64>,
    pub total_mean: Vec<f64>,
    pub total_std: Vec<f64>,
    pub runs: usize,
}

impl EnsembleSeries {
    /// Mean total density at the recording time nearest to `t`.
    pub fn total_mean_at(&self, t: f64) -> f64 {
        let i = self
            .times
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - t).abs().total_cmp(&(b.1 - t).abs()))
            .map_or(0, |(i, _)| i);
        self.total_mean[i]
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(
            out,
            "t,m_density_mean,m_density_std,p_density_mean,p_density_std,total_density_mean,total_density_std"
        )?;
        for i in 0..self.times.len() {
            writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                self.times[i],
                self.m_mean[i],
                self.m_std[i],
                self.p_mean[i],
                self.p_std[i],
                self.total_mean[i],
                self.total_std[i]
            )?;
        }
        Ok(())
    }
}

fn mean_std(columns: &[&[f64]], i: usize) -> (f64, f64) {
    let n = columns.len() as f64;
    let mean = columns.iter().map(|c| c[i]).sum::<f64>() / n;
    let var = columns.iter().map(|c| (c[i] - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Runs one simulation per entry of `streams` in parallel and aggregates.
pub fn ensemble(
    params: &LatticeParams,
    master_seed: u64,
    streams: &[u64],
    t_end: f64,
    record_dt: f64,
) -> Result<EnsembleSeries> {
    if streams.len() < 2 {
        return Err(invalid("an ensemble needs at least two runs"));
    }
    let runs: Vec<DensitySeries> = streams
        .par_iter()
        .map(|&s| AbmState::init(*params, master_seed, s)?.run(t_end, record_dt))
        .collect::<Result<_>>()?;
    let totals: Vec<Vec<f64>> = runs.iter().map(DensitySeries::total).collect();
    let ms: Vec<&[f64]> = runs.iter().map(|r| r.m.as_slice()).collect();
    let ps: Vec<&[f64]> = runs.iter().map(|r| r.p.as_slice()).collect();
    let ts: Vec<&[f64]> = totals.iter().map(Vec::as_slice).collect();
    let len = runs[0].times.len();
    let (mut m_mean, mut m_std) = (Vec::with_capacity(len), Vec::with_capacity(len));
    let (mut p_mean, mut p_std) = (Vec::with_capacity(len), Vec::with_capacity(len));
    let (mut total_mean, mut total_std) = (Vec::with_capacity(len), Vec::with_capacity(len));
    for i in 0..len {
        let (a, b) = mean_std(&ms, i);
        m_mean.push(a);
        m_std.push(b);
        let (a, b) = mean_std(&ps, i);
        p_mean.push(a);
        p_std.push(b);
        let (a, b) = mean_std(&ts, i);
        total_mean.push(a);
        total_std.push(b);
    }
    Ok(EnsembleSeries {
        times: runs[0].times.clone(),
        m_mean,
        m_std,
        p_mean,
        p_std,
        total_mean,
        total_std,
        runs: streams.len(),
    })
}

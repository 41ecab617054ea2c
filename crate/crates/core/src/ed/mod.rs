//! Finite-N exact diagonalization in the maximal collective-spin subspace.
//!
//! Each sublattice of `N/2` atoms is a spin `j = N/4`. The Hamiltonian is
//! invariant under `P = (−1)^{b†b} · R_z(π) · (2 ↔ 3)`; the swap is needed
//! because the π rotation alone flips the sign of the staggered field.
//! Eigenproblems are solved sector by sector.

pub mod basis;
pub mod lanczos;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fluctuations;
use crate::meanfield;
use crate::params::ModelParams;

pub use basis::{Couplings, Hamiltonian, Sector, SpinSpace};
pub use lanczos::{dense_ground, dense_lowest, lanczos_lowest, Eigenpairs};

/// Full-space dimension below which sectors are diagonalized densely.
pub const DENSE_THRESHOLD: usize = 4000;
/// Photon cutoff increment per truncation check.
pub const N_MAX_STEP: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdConfig {
    /// Total atom number, positive and even.
    pub atoms: usize,
    pub params: ModelParams,
    /// Energy scale `ω₀ = √(ε² + δ²)`.
    pub omega0: f64,
    /// Starting photon cutoff; `None` uses the occupation-based default.
    pub n_max: Option<usize>,
    /// Relative ground-energy change accepted between `n_max` and `n_max + 8`.
    pub tolerance: f64,
    /// Largest Hilbert dimension that may be allocated.
    pub max_dim: usize,
    /// How many times `n_max` may grow by 8 before giving up.
    pub max_escalations: usize,
    /// Seed for the iterative solver's start vector.
    pub seed: u64,
}

impl EdConfig {
    pub fn new(atoms: usize, params: ModelParams) -> Self {
        Self {
            atoms,
            params,
            omega0: 1.0,
            n_max: None,
            tolerance: 1e-10,
            max_dim: 2_000_000,
            max_escalations: 12,
            seed: 0x5eed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ModelParams::new(self.params.x, self.params.y, self.params.lambda)?;
        if self.atoms == 0 || self.atoms % 2 != 0 {
            return Err(Error::Config(format!("atom number {} must be a positive even integer", self.atoms)));
        }
        if !(self.omega0.is_finite() && self.omega0 > 0.0) {
            return Err(Error::Config(format!("omega0 = {} must be positive", self.omega0)));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(Error::Config(format!("tolerance = {} must be positive", self.tolerance)));
        }
        Ok(())
    }

    pub fn couplings(&self) -> Couplings {
        let raw = self.params.to_raw(self.omega0);
        Couplings { omega: raw.omega, delta: raw.delta, g: raw.g, epsilon: raw.epsilon }
    }

    /// `max(16, ⌈N z²/(yλ)⌉ + 32)` from the mean-field photon number.
    pub fn default_n_max(&self) -> Result<usize> {
        let z = meanfield::minimize(&self.params)?.z;
        let occupation = if z == 0.0 {
            0.0
        } else {
            4.0 * self.atoms as f64 * z * z / (4.0 * self.params.y * self.params.lambda)
        };
        Ok(16.max(occupation.ceil() as usize + 32))
    }

    pub fn build(&self, n_max: usize) -> Result<Hamiltonian> {
        Hamiltonian::new(self.couplings(), self.atoms, n_max, self.max_dim)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdResult {
    pub atoms: usize,
    pub n_max: usize,
    pub dim: usize,
    /// In units of `ω₀`, as are all energies below.
    pub ground_energy: f64,
    /// `E₁ − E₀` over the whole spectrum.
    pub gap: f64,
    /// Gap inside the ground state's parity sector.
    pub gap_same_parity: f64,
    /// Lowest opposite-parity level above the ground state.
    pub gap_opposite_parity: f64,
    /// The gap to compare with the fluctuation spectrum: inside the ground
    /// sector when the mean-field state breaks parity (the lowest two levels
    /// then form a tunnelling doublet), `gap` otherwise.
    pub excitation_gap: f64,
    pub ground_parity: i8,
    pub parity_expectation: f64,
    pub n_photon: f64,
    pub n_photon_per_atom: f64,
    pub b_expectation: f64,
    pub entropy: f64,
    pub truncation_converged: bool,
    /// Relative ground-energy change in the last truncation check.
    pub energy_change: f64,
}

#[derive(Debug, Clone)]
struct SectorLevels {
    parity: i8,
    values: Vec<f64>,
    ground: Vec<f64>,
}

fn solve_sector(h: &Hamiltonian, parity: i8, seed: u64, tolerance: f64) -> Result<SectorLevels> {
    let sector = h.sector(Some(parity));
    let dim = sector.dim();
    let full = h.dim();
    let apply = |v: &[f64], out: &mut [f64]| {
        let mut hv = vec![0.0; full];
        h.apply(&sector.embed(v), &mut hv);
        out.copy_from_slice(&sector.project(&hv));
    };
    let pairs = if full < DENSE_THRESHOLD {
        let mut m = DMatrix::zeros(dim, dim);
        let mut unit = vec![0.0; dim];
        let mut col = vec![0.0; dim];
        for j in 0..dim {
            unit[j] = 1.0;
            apply(&unit, &mut col);
            unit[j] = 0.0;
            for i in 0..dim {
                m[(i, j)] = col[i];
            }
        }
        let sym = (&m + m.transpose()) * 0.5;
        dense_ground(sym, 2)?
    } else {
        lanczos_lowest(apply, dim, 2, tolerance, seed ^ (parity as u64))?
    };
    let ground = sector.embed(&pairs.vectors[0]);
    Ok(SectorLevels { parity, values: pairs.values, ground })
}

fn reduced_photon_entropy(psi: &[f64], n_max: usize, ds: usize) -> f64 {
    let mut rho = DMatrix::zeros(n_max + 1, n_max + 1);
    for n in 0..=n_max {
        for m in 0..=n {
            let v: f64 = (0..ds).map(|s| psi[n * ds + s] * psi[m * ds + s]).sum();
            rho[(n, m)] = v;
            rho[(m, n)] = v;
        }
    }
    rho.symmetric_eigenvalues()
        .iter()
        .filter(|&&p| p > 1e-300)
        .map(|&p| -p * p.ln())
        .sum::<f64>()
        .max(0.0)
}

/// Diagonalize at a fixed cutoff.
pub fn solve_at(cfg: &EdConfig, n_max: usize) -> Result<EdResult> {
    cfg.validate()?;
    let h = cfg.build(n_max)?;
    let even = solve_sector(&h, 1, cfg.seed, cfg.tolerance)?;
    let odd = solve_sector(&h, -1, cfg.seed, cfg.tolerance)?;
    let (g, o) = if even.values[0] <= odd.values[0] { (even, odd) } else { (odd, even) };
    let e0 = g.values[0];
    let same = g.values.get(1).map_or(f64::INFINITY, |e| e - e0);
    let opposite = o.values[0] - e0;

    let broken = meanfield::minimize(&cfg.params)?.z > 0.0;
    let excitation = if broken { same } else { same.min(opposite) };

    let psi = &g.ground;
    let ds = h.spin.dim;
    let (mut n_photon, mut b) = (0.0, 0.0);
    for n in 0..=n_max {
        let block = &psi[n * ds..(n + 1) * ds];
        n_photon += n as f64 * block.iter().map(|a| a * a).sum::<f64>();
        if n > 0 {
            let below = &psi[(n - 1) * ds..n * ds];
            b += (n as f64).sqrt() * below.iter().zip(block).map(|(a, c)| a * c).sum::<f64>();
        }
    }
    let p_psi = h.apply_parity(psi).expect("even atom number has a parity");
    let parity_expectation = psi.iter().zip(&p_psi).map(|(a, c)| a * c).sum();
    Ok(EdResult {
        atoms: cfg.atoms,
        n_max,
        dim: h.dim(),
        ground_energy: e0 / cfg.omega0,
        gap: same.min(opposite) / cfg.omega0,
        gap_same_parity: same / cfg.omega0,
        gap_opposite_parity: opposite / cfg.omega0,
        excitation_gap: excitation / cfg.omega0,
        ground_parity: g.parity,
        parity_expectation,
        n_photon,
        n_photon_per_atom: n_photon / cfg.atoms as f64,
        b_expectation: b,
        entropy: reduced_photon_entropy(psi, n_max, ds),
        truncation_converged: false,
        energy_change: f64::NAN,
    })
}

/// Ground state and gaps with adaptive photon truncation.
///
/// The cutoff grows by 8 until the relative ground-energy change drops
/// below `cfg.tolerance`. Running out of escalations or memory budget gives
/// a result with `truncation_converged = false`.
pub fn ground_and_gap(cfg: &EdConfig) -> Result<EdResult> {
    cfg.validate()?;
    let start = match cfg.n_max {
        Some(n) => n,
        None => cfg.default_n_max()?,
    };
    // Both the first and the checking cutoff must fit before any work.
    cfg.build(start + N_MAX_STEP)?;
    let mut current = solve_at(cfg, start)?;
    for _ in 0..=cfg.max_escalations {
        let n_next = current.n_max + N_MAX_STEP;
        let next = match cfg.build(n_next) {
            Ok(_) => solve_at(cfg, n_next)?,
            Err(Error::Config(_)) => break,
            Err(e) => return Err(e),
        };
        let change = ((next.ground_energy - current.ground_energy) / next.ground_energy.abs().max(1e-300)).abs();
        if change < cfg.tolerance {
            return Ok(EdResult { truncation_converged: true, energy_change: change, ..current });
        }
        current = EdResult { energy_change: change, ..next };
    }
    Ok(current)
}

/// Thermodynamic-limit values that finite-N results should approach.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermodynamicLimit {
    pub energy_per_atom: f64,
    pub n_photon_per_atom: f64,
    pub gap: f64,
    pub entropy: f64,
}

pub fn thermodynamic_limit(p: &ModelParams) -> Result<ThermodynamicLimit> {
    let sol = meanfield::minimize(p)?;
    let fl = fluctuations::analyze(p, sol.z)?;
    let n_photon_per_atom = if sol.z == 0.0 { 0.0 } else { sol.z * sol.z / (4.0 * p.y * p.lambda) };
    Ok(ThermodynamicLimit { energy_per_atom: sol.energy / 2.0, n_photon_per_atom, gap: fl.gap, entropy: fl.entropy })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub atoms: usize,
    pub energy_per_atom: f64,
    pub gap: f64,
    pub gap_same_parity: f64,
    pub excitation_gap: f64,
    pub n_photon_per_atom: f64,
    pub entropy: f64,
    pub truncation_converged: bool,
}

/// Runs every configuration; all must share `(x, y, λ)`.
pub fn finite_size_scan(cfgs: &[EdConfig]) -> Result<Vec<ScanRow>> {
    if let Some(first) = cfgs.first() {
        if cfgs.iter().any(|c| c.params != first.params) {
            return Err(Error::Config("finite-size scan needs one common (x, y, lambda)".into()));
        }
    }
    cfgs.iter()
        .map(|cfg| {
            let r = ground_and_gap(cfg)?;
            Ok(ScanRow {
                atoms: r.atoms,
                energy_per_atom: r.ground_energy / r.atoms as f64,
                gap: r.gap,
                gap_same_parity: r.gap_same_parity,
                excitation_gap: r.excitation_gap,
                n_photon_per_atom: r.n_photon_per_atom,
                entropy: r.entropy,
                truncation_converged: r.truncation_converged,
            })
        })
        .collect()
}

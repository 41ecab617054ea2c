//! Collective-spin product basis and the Hamiltonian acting on it.
//!
//! States are `|n⟩ ⊗ |j, m₂⟩ ⊗ |j, m₃⟩` with `j = N/4` per group, indexed
//! `n · d_spin + s` with `s = k₂ · (2j + 1) + k₃` and `k = m + j`.

use crate::error::{Error, Result};

/// Sparse rows: `row[i]` lists `(column, value)`.
type SparseRows = Vec<Vec<(usize, f64)>>;

fn sparse_apply(rows: &SparseRows, v: &[f64], out: &mut [f64], scale: f64) {
    for (i, row) in rows.iter().enumerate() {
        let mut acc = 0.0;
        for &(j, a) in row {
            acc += a * v[j];
        }
        out[i] += scale * acc;
    }
}

/// `Jx` of a single spin of size `twice_j/2` in the `m = k − j` basis.
fn jx_elements(twice_j: usize) -> Vec<(usize, usize, f64)> {
    let j = twice_j as f64 / 2.0;
    let mut out = Vec::new();
    for k in 0..twice_j {
        let m = k as f64 - j;
        let amp = 0.5 * (j * (j + 1.0) - m * (m + 1.0)).sqrt();
        out.push((k + 1, k, amp));
        out.push((k, k + 1, amp));
    }
    out
}

/// Operators on the atomic factor of the basis.
#[derive(Debug, Clone)]
pub struct SpinSpace {
    /// `2j` of each group.
    pub twice_j: usize,
    /// Sign of the staggered field on each group.
    pub field_signs: Vec<f64>,
    pub dim: usize,
    jz_total: Vec<f64>,
    jx_sum: SparseRows,
    jx_staggered: SparseRows,
    /// `P|s⟩ = sign · |target⟩` on the spin factor, when a parity exists.
    parity: Option<Vec<(usize, f64)>>,
}

impl SpinSpace {
    pub fn new(atoms: usize) -> Result<Self> {
        if atoms == 0 || atoms % 2 != 0 {
            return Err(Error::Config(format!("atom number {atoms} must be a positive even integer")));
        }
        Ok(Self::build(atoms / 2, vec![1.0, -1.0]))
    }

    fn build(twice_j: usize, field_signs: Vec<f64>) -> Self {
        let d = twice_j + 1;
        let groups = field_signs.len();
        let dim = d.pow(groups as u32);
        let j = twice_j as f64 / 2.0;
        let digits = |s: usize| -> Vec<usize> {
            let mut ks = vec![0; groups];
            let mut rest = s;
            for g in (0..groups).rev() {
                ks[g] = rest % d;
                rest /= d;
            }
            ks
        };
        let index = |ks: &[usize]| ks.iter().fold(0, |acc, &k| acc * d + k);
        let single = jx_elements(twice_j);

        let mut jz_total = vec![0.0; dim];
        let mut jx_sum: SparseRows = vec![Vec::new(); dim];
        let mut jx_staggered: SparseRows = vec![Vec::new(); dim];
        for s in 0..dim {
            let ks = digits(s);
            jz_total[s] = ks.iter().map(|&k| k as f64 - j).sum();
            for (g, &sign) in field_signs.iter().enumerate() {
                for &(row, col, amp) in &single {
                    if col != ks[g] {
                        continue;
                    }
                    let mut target = ks.clone();
                    target[g] = row;
                    let t = index(&target);
                    jx_sum[t].push((s, amp));
                    jx_staggered[t].push((s, sign * amp));
                }
            }
        }
        // Rotating both groups by π about z and exchanging them leaves the
        // staggered field invariant.
        let parity = (groups == 2).then(|| {
            (0..dim)
                .map(|s| {
                    let ks = digits(s);
                    let sign = if (ks[0] + ks[1]) % 2 == 0 { 1.0 } else { -1.0 };
                    (index(&[ks[1], ks[0]]), sign)
                })
                .collect()
        });
        Self { twice_j, field_signs, dim, jz_total, jx_sum, jx_staggered, parity }
    }

    pub fn has_parity(&self) -> bool {
        self.parity.is_some()
    }

    /// Group quantum numbers `k_g = m_g + j` of spin state `s`.
    pub fn digits(&self, s: usize) -> Vec<usize> {
        let d = self.twice_j + 1;
        let mut ks = vec![0; self.field_signs.len()];
        let mut rest = s;
        for g in (0..ks.len()).rev() {
            ks[g] = rest % d;
            rest /= d;
        }
        ks
    }
}

/// Hamiltonian parameters in absolute energy units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Couplings {
    pub omega: f64,
    pub delta: f64,
    pub g: f64,
    pub epsilon: f64,
}

/// `H = ω b†b + δ Σ J_gᶻ + (g/√N)(b + b†) Σ J_gˣ + ε Σ s_g J_gˣ`, applied
/// without storing the matrix.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    pub couplings: Couplings,
    pub atoms: usize,
    pub n_max: usize,
    pub spin: SpinSpace,
}

impl Hamiltonian {
    pub fn new(couplings: Couplings, atoms: usize, n_max: usize, max_dim: usize) -> Result<Self> {
        let spin = SpinSpace::new(atoms)?;
        let dim = (n_max + 1).checked_mul(spin.dim).unwrap_or(usize::MAX);
        if dim > max_dim {
            return Err(Error::Config(format!(
                "Hilbert dimension {dim} (N = {atoms}, n_max = {n_max}) exceeds the budget of {max_dim}"
            )));
        }
        Ok(Self { couplings, atoms, n_max, spin })
    }

    pub fn dim(&self) -> usize {
        (self.n_max + 1) * self.spin.dim
    }

    pub fn apply(&self, v: &[f64], out: &mut [f64]) {
        let ds = self.spin.dim;
        let Couplings { omega, delta, g, epsilon } = self.couplings;
        let c = g / (self.atoms as f64).sqrt();
        out.fill(0.0);
        let mut jx_v = vec![0.0; v.len()];
        for n in 0..=self.n_max {
            sparse_apply(&self.spin.jx_sum, &v[n * ds..(n + 1) * ds], &mut jx_v[n * ds..(n + 1) * ds], 1.0);
        }
        for n in 0..=self.n_max {
            let block = n * ds..(n + 1) * ds;
            let (vn, on) = (&v[block.clone()], &mut out[block]);
            for s in 0..ds {
                on[s] += (omega * n as f64 + delta * self.spin.jz_total[s]) * vn[s];
            }
            sparse_apply(&self.spin.jx_staggered, vn, on, epsilon);
            if n > 0 {
                let amp = c * (n as f64).sqrt();
                for s in 0..ds {
                    on[s] += amp * jx_v[(n - 1) * ds + s];
                }
            }
            if n < self.n_max {
                let amp = c * ((n + 1) as f64).sqrt();
                for s in 0..ds {
                    on[s] += amp * jx_v[(n + 1) * ds + s];
                }
            }
        }
    }

    /// `P(n, s) = (−1)ⁿ σ(s) (n, π(s))`, or `None` without a parity.
    pub fn parity_image(&self, index: usize) -> Option<(usize, f64)> {
        let ds = self.spin.dim;
        let (n, s) = (index / ds, index % ds);
        let map = self.spin.parity.as_ref()?;
        let (t, sign) = map[s];
        let photon = if n % 2 == 0 { 1.0 } else { -1.0 };
        Some((n * ds + t, photon * sign))
    }

    pub fn apply_parity(&self, v: &[f64]) -> Option<Vec<f64>> {
        self.spin.parity.as_ref()?;
        let mut out = vec![0.0; v.len()];
        for (i, &a) in v.iter().enumerate() {
            let (t, sign) = self.parity_image(i).expect("parity exists");
            out[t] += sign * a;
        }
        Some(out)
    }

    /// Symmetry-adapted basis of one parity sector, or the full canonical
    /// basis when there is no parity.
    pub fn sector(&self, parity: Option<i8>) -> Sector {
        let dim = self.dim();
        let mut vectors = Vec::new();
        match parity {
            None => vectors.extend((0..dim).map(|i| vec![(i, 1.0)])),
            Some(p) => {
                let p = p as f64;
                let h = std::f64::consts::FRAC_1_SQRT_2;
                for i in 0..dim {
                    let (t, sign) = self.parity_image(i).expect("sector requested without parity");
                    if t == i {
                        if sign == p {
                            vectors.push(vec![(i, 1.0)]);
                        }
                    } else if i < t {
                        vectors.push(vec![(i, h), (t, p * sign * h)]);
                    }
                }
            }
        }
        Sector { parity, full_dim: dim, vectors }
    }
}

/// Orthonormal basis of an invariant subspace, stored as sparse vectors.
#[derive(Debug, Clone)]
pub struct Sector {
    pub parity: Option<i8>,
    pub full_dim: usize,
    pub vectors: Vec<Vec<(usize, f64)>>,
}

impl Sector {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn embed(&self, coeffs: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.full_dim];
        for (c, vec) in coeffs.iter().zip(&self.vectors) {
            for &(i, a) in vec {
                out[i] += c * a;
            }
        }
        out
    }

    pub fn project(&self, full: &[f64]) -> Vec<f64> {
        self.vectors.iter().map(|vec| vec.iter().map(|&(i, a)| a * full[i]).sum()).collect()
    }
}

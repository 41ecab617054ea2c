use tricritical::ed::{finite_size_scan, thermodynamic_limit, EdConfig};
use tricritical::ModelParams;

fn scan(x: f64, y: f64, lambda: f64, sizes: &[usize]) -> Vec<tricritical::ed::ScanRow> {
    let p = ModelParams::new(x, y, lambda).unwrap();
    let cfgs: Vec<EdConfig> = sizes.iter().map(|&n| EdConfig::new(n, p)).collect();
    let rows = finite_size_scan(&cfgs).unwrap();
    assert!(rows.iter().all(|r| r.truncation_converged));
    rows
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

#[test]
fn superradiant_photon_density_approaches_mean_field() {
    let rows = scan(0.0, 2.0, 1.0, &[8, 16, 24, 32]);
    let dev: Vec<f64> = rows.iter().map(|r| (r.n_photon_per_atom - 0.375).abs()).collect();
    assert!(strictly_decreasing(&dev), "{dev:?}");
}

#[test]
fn normal_phase_photon_density_vanishes() {
    let rows = scan(0.2, 0.5, 1.0, &[8, 16, 24]);
    let n: Vec<f64> = rows.iter().map(|r| r.n_photon_per_atom).collect();
    assert!(strictly_decreasing(&n), "{n:?}");
    assert!(n[2] < 0.01);
}

#[test]
fn dicke_gap_approaches_normal_mode_frequency() {
    // Two coupled oscillators at λ = 1: Δ² = (2 − √(4y))/2.
    let y: f64 = 0.5;
    let expected = ((2.0 - (4.0 * y).sqrt()) / 2.0).sqrt();
    let rows = scan(0.0, y, 1.0, &[8, 16, 24]);
    let dev: Vec<f64> = rows.iter().map(|r| (r.excitation_gap - expected).abs()).collect();
    assert!(strictly_decreasing(&dev), "{dev:?}");
    assert!(dev[2] < 0.02);
}

#[test]
fn energy_per_atom_approaches_mean_field_from_below_band() {
    for (x, y) in [(0.3, 0.5), (0.0, 2.0), (0.6, 1.6)] {
        let p = ModelParams::new(x, y, 1.0).unwrap();
        let limit = thermodynamic_limit(&p).unwrap();
        let rows = scan(x, y, 1.0, &[8, 16, 24]);
        let dev: Vec<f64> = rows.iter().map(|r| (r.energy_per_atom - limit.energy_per_atom).abs()).collect();
        assert!(rows.iter().all(|r| r.energy_per_atom >= limit.energy_per_atom - 1.0));
        assert!(strictly_decreasing(&dev), "({x}, {y}): {dev:?}");
    }
}

//! Map-level invariants that need the full default surface grid.

use stirap_wire::config::Config;
use stirap_wire::geometry::Confinement;
use stirap_wire::sweep::{build_map, find_optimum};

#[test]
fn resonance_dips_and_optimum_region_invariants() {
    let map = build_map(Confinement::Surface, &Config::default());

    // localized electron-phonon resonances: some cell's Γ_ep towers over
    // the median of its own L-row
    let mut dips = 0usize;
    for il in 0..map.l_axis.len() {
        let mut row: Vec<f64> = (0..map.w_axis.len())
            .filter_map(|iw| map.cell(iw, il).values.map(|v| v.gamma_ep))
            .collect();
        if row.len() < 4 {
            continue;
        }
        row.sort_by(f64::total_cmp);
        let median = row[row.len() / 2];
        if median > 0.0 && row[row.len() - 1] > 10.0 * median {
            dips += 1;
        }
    }
    assert!(dips > 0, "no resonant scattering spikes found in any row");

    // the optimum must belong to the feasible region when one exists
    let report = find_optimum(&map).unwrap();
    if !report.feasible_region.is_empty() {
        assert!(
            report
                .feasible_region
                .iter()
                .any(|cell| cell.w == report.best_w && cell.l == report.best_l),
            "optimum at ({:.3e}, {:.3e}) not in the nonempty feasible region",
            report.best_w,
            report.best_l
        );
    }
    assert!(report.best_ratio > 0.0);
}

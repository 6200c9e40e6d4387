use std::time::Instant;

use bergman_core::operator::{nystrom_grid, spectrum_compare};
use bergman_core::spectral::OperatorParams;

// Nyström eigenvalues on 512, 1024 and 2048 interior nodes against μ_n = (α)_n/(2)_n.
#[test]
fn disk_spectrum_converges_under_grid_doubling() {
    for alpha in [0.5, 1.0] {
        let start = Instant::now();
        let params = OperatorParams::new(alpha, 1).unwrap();
        let grids: Vec<_> = [64, 128, 256].iter().map(|&a| nystrom_grid(1, a).unwrap()).collect();
        let table = spectrum_compare(&params, &grids, 5).unwrap();
        let errors: Vec<f64> = table.rows.iter().map(|r| r.max_error).collect();
        eprintln!("alpha {alpha}: errors {errors:?} in {:?}", start.elapsed());
        assert_eq!(table.rows[2].nodes, 2048);
        assert!(errors[2] < 1e-3);
        assert!(table.min_reduction >= 2.0, "{errors:?}");
    }
}

//! Two point scatterers through the FFT chain; prints where each peak lands.

use num_complex::Complex64;
use radpose::simulator::{expected_bins, synthesize_frame};
use radpose::{derive_params, fft_chain, ChainOptions, RadarConfig, Scatterer, Scene};

fn main() -> radpose::Result<()> {
    let cfg = RadarConfig::hupr_like();
    let params = derive_params(&cfg)?;
    println!(
        "range res {:.2} cm, max range {:.2} m, v_amb {:.2} m/s",
        params.range_resolution * 100.0,
        params.max_range(&cfg),
        params.max_velocity
    );

    let targets = [
        Scatterer::new(1.2, 0.3, 2.0, Complex64::new(1.0, 0.0)),
        Scatterer::new(2.4, -0.5, -4.0, Complex64::new(0.5, 0.0)),
    ];
    let cube = fft_chain(&synthesize_frame(&Scene::new(targets.to_vec()), &cfg, 0)?, &ChainOptions::new(64))?;
    for t in &targets {
        let (r, a, d) = expected_bins(t, &cfg, &params, 64, 64, 16);
        println!(
            "target at {:.1} m / {:+.2} rad / {:+.1} m/s -> bin ({r}, {a}, {d}), |z| = {:.3}",
            t.range_m,
            t.azimuth_rad,
            t.velocity_mps,
            cube.get(r, a, d).norm()
        );
    }
    Ok(())
}

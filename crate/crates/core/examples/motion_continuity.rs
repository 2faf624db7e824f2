//! A mover next to static clutter: the Doppler gate keeps the mover and
//! drops the clutter.

use num_complex::Complex64;
use radpose::simulator::{expected_bins, synthesize_frame};
use radpose::{derive_params, fft_chain, ChainOptions, Pipeline, Profile, RadarConfig, Scatterer, Scene, Window};

fn main() -> radpose::Result<()> {
    let cfg = RadarConfig::hupr_like();
    let params = derive_params(&cfg)?;
    let one = Complex64::new(1.0, 0.0);
    let mover = Scatterer::new(1.5, 0.05, 1.5, one);
    let wall = Scatterer::new(1.5 + 2.0 * params.range_resolution, 0.05, 0.0, one * 2.0);
    let scene = Scene {
        scatterers: vec![mover],
        clutter: vec![wall],
        noise_sigma: 0.0,
    };
    let opts = ChainOptions {
        range_bins: 64,
        window: Window::Hann,
    };
    let cube = fft_chain(&synthesize_frame(&scene, &cfg, 0)?, &opts)?;
    let front = Pipeline::new(&cfg, Profile::balanced(), 64)?.front_end(&cube)?;
    let m = &front.motion;

    for (label, s) in [("mover", &mover), ("clutter", &wall)] {
        let (r, a, _) = expected_bins(s, &cfg, &params, 64, 64, 16);
        println!(
            "{label:>8}: v = {:+.2} m/s, local sigma = {:.2}, kept = {}",
            m.field.velocity.get(r, a),
            m.stats.variance.get(r, a).sqrt(),
            m.mask.get(r, a)
        );
    }
    let d = m.descriptors;
    println!("descriptors: mean {:+.3}, std {:.3}, max |v| {:.3}", d.mean, d.std, d.max_abs);
    Ok(())
}

//! Lift a range-angle map and a range-Doppler map into a cube.

use radpose::pseudo_rad::build_pseudo_rad;
use radpose::tensor::Grid2;

fn main() -> radpose::Result<()> {
    let h_ra = Grid2::from_fn(4, 3, |r, a| if r == 2 { [0.5, 2.0, 0.5][a] } else { 0.0 });
    let h_rd = Grid2::from_fn(4, 4, |r, d| if r == 2 { [0.0, 1.0, 3.0, 0.0][d] } else { 0.0 });
    let cube = build_pseudo_rad(&h_ra, &h_rd)?;
    for a in 0..3 {
        let row: Vec<f64> = (0..4).map(|d| cube.get(0, 2, a, d)).collect();
        println!("r=2 a={a}: {row:?}");
    }
    Ok(())
}

//! Analytic cost of each built-in profile, split by stage.

use radpose::flops::flop_estimate;
use radpose::{build_axis_maps, derive_params, Profile, RadarConfig};

fn main() -> radpose::Result<()> {
    let cfg = RadarConfig::hupr_like();
    let axes = build_axis_maps(&cfg, &derive_params(&cfg)?, 64)?;
    println!("{:>16} {:>10} {:>10} {:>10} {:>10} {:>10}", "profile", "ssp", "mcp", "hmsf", "prn", "total");
    for p in Profile::builtins() {
        let f = flop_estimate(&p, &axes, 14)?;
        println!(
            "{:>16} {:>10} {:>10} {:>10} {:>10} {:>10}",
            p.name,
            f.ssp(),
            f.mcp(),
            f.hmsf(),
            f.prn(),
            f.total()
        );
    }
    println!();
    print!("{}", Profile::balanced().emit());
    Ok(())
}

// Static (anhysteretic) magnetization curves for the catalog particles over
// the ±5000 Oe characterization range.
//
// Run:
//   cargo run --release --example static_mh
//
// Output:
//   out/static_mh/<particle>.csv   columns h_oe,m_am2_per_kg

use std::fs;
use std::io::Write;

use mpspec::catalog::Catalog;
use mpspec::physics::static_mh_curve;
use mpspec::units::{oersted_to_si, si_to_oersted};

fn main() -> std::io::Result<()> {
    let catalog = Catalog::builtin();
    let out_dir = std::path::Path::new("out").join("static_mh");
    fs::create_dir_all(&out_dir)?;

    let h_max = oersted_to_si(5000.0);
    let n = 401;
    let grid: Vec<f64> = (0..n)
        .map(|i| -h_max + 2.0 * h_max * i as f64 / (n - 1) as f64)
        .collect();

    for name in catalog.particle_names() {
        let model = catalog.particle(name).unwrap();
        let curve = static_mh_curve(model, &catalog.environment, &grid);
        let path = out_dir.join(format!("{name}.csv"));
        let mut file = fs::File::create(&path)?;
        writeln!(file, "h_oe,m_am2_per_kg")?;
        for (h, m) in &curve {
            writeln!(file, "{:e},{:e}", si_to_oersted(*h), m)?;
        }
        let m_end = curve.last().unwrap().1;
        println!(
            "{name}: m({:.0} Oe) = {:.2} A·m²/kg ({:.1}% of saturation) -> {}",
            5000.0,
            m_end,
            100.0 * m_end / model.m_sat,
            path.display()
        );
    }
    Ok(())
}

// Resonant drive design: current-vs-frequency sweeps of the two excitation
// coils for several series capacitor choices, plus capacitor sizing for the
// sweep-protocol drive frequencies.
//
// Smaller capacitors shift the resonance upward while the peak current stays
// at V/R, which is what makes high-frequency high-field operation practical.
//
// Run:
//   cargo run --release --example resonance_design
//
// Output:
//   out/resonance_design/<coil>_<label>.csv   columns f_hz,i_amp

use std::fs;
use std::io::Write;

use mpspec::circuit::{
    current_magnitude_sweep, design_resonant_capacitor, resonant_frequency, CoilSpec, DriveSpec,
};

fn log_grid(f_start: f64, f_stop: f64, points: usize) -> Vec<f64> {
    let ratio = (f_stop / f_start).powf(1.0 / (points - 1) as f64);
    (0..points).map(|i| f_start * ratio.powi(i as i32)).collect()
}

fn main() -> std::io::Result<()> {
    let out_dir = std::path::Path::new("out").join("resonance_design");
    fs::create_dir_all(&out_dir)?;

    let cases = [
        ("primary", CoilSpec::primary(), 12.0, [None, Some(10e-6), Some(200e-9)]),
        ("secondary", CoilSpec::secondary(), 10.0, [None, Some(1e-6), Some(20e-9)]),
    ];
    for (coil_name, coil, volts, capacitors) in cases {
        for c_r in capacitors {
            let drive = DriveSpec {
                source_voltage: volts,
                resonant_capacitor: c_r,
            };
            let label = match c_r {
                None => "no_cr".to_string(),
                Some(c) if c >= 1e-6 => format!("cr_{:.0}uF", c * 1e6),
                Some(c) => format!("cr_{:.0}nF", c * 1e9),
            };
            let grid = log_grid(50.0, 200_000.0, 400);
            let sweep = current_magnitude_sweep(&coil, &drive, &grid);
            let path = out_dir.join(format!("{coil_name}_{label}.csv"));
            let mut file = fs::File::create(&path)?;
            writeln!(file, "f_hz,i_amp")?;
            for (f, i) in &sweep {
                writeln!(file, "{f:e},{i:e}")?;
            }
            match resonant_frequency(&coil, &drive) {
                Ok(res) => println!(
                    "{coil_name:<9} {label:<9}: resonance {:.0} Hz (seed {:.0} Hz), peak {:.3} A -> {}",
                    res.frequency,
                    res.analytic_seed,
                    res.peak_current,
                    path.display()
                ),
                Err(_) => println!(
                    "{coil_name:<9} {label:<9}: no series capacitor, no resonance -> {}",
                    path.display()
                ),
            }
        }
    }

    // Capacitors that would center each sweep-protocol drive frequency.
    println!("\ncapacitor sizing for the primary coil:");
    for f_target in [50.0, 130.0, 285.0, 620.0, 1380.0] {
        let c = design_resonant_capacitor(&CoilSpec::primary(), f_target).unwrap();
        println!("  f = {f_target:>6.0} Hz -> C_R = {:.3e} F", c);
    }
    println!("capacitor sizing for the secondary coil:");
    for f_target in [1e3, 5e3, 14e3, 27e3] {
        let c = design_resonant_capacitor(&CoilSpec::secondary(), f_target).unwrap();
        println!("  f = {f_target:>6.0} Hz -> C_R = {:.3e} F", c);
    }
    Ok(())
}

//! Build the default far-field grid and report how even it is.
//!
//! `cargo run --release --example spherical_grid -- 4000 60`

use nf2ff::make_spherical_grid;

fn main() -> nf2ff::Result<()> {
    let mut args = std::env::args().skip(1);
    let count: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(4000);
    let theta_max_deg: f64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(60.0);
    let grid = make_spherical_grid(count, theta_max_deg.to_radians())?;
    let dirs = grid.directions();

    let nn: Vec<f64> = dirs
        .iter()
        .enumerate()
        .map(|(i, a)| {
            dirs.iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, b)| a.angle_to(b))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let mean = nn.iter().sum::<f64>() / nn.len() as f64;
    let var = nn.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / nn.len() as f64;

    println!("requested {count}, built {} directions on {} rings", grid.len(), grid.rings().len());
    println!(
        "nearest-neighbour spacing: mean {:.3}°, CV {:.3}",
        mean.to_degrees(),
        var.sqrt() / mean
    );
    for ring in grid.rings().iter().step_by((grid.rings().len() / 6).max(1)) {
        println!("  θ = {:6.2}°  {:4} points", ring.theta.to_degrees(), ring.count);
    }
    Ok(())
}

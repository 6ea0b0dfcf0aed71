// Draws a reference-sized deployment and writes it to a topology file.
//
//     cargo run --example generate_topology

use spectrum_game::{generate_topology, DeploymentParams, NetworkTopology};

pub fn run_example() -> spectrum_game::Result<NetworkTopology> {
    let params = DeploymentParams::default();
    let topology = generate_topology(&params, 7)?;

    let dir = std::env::temp_dir().join("spectrum-game-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("topology.txt");
    topology.save_file(&path)?;
    let reloaded = NetworkTopology::load_file(&path)?;
    assert_eq!(reloaded, topology);

    println!(
        "{} cells in a {:.0} m square, {} interference edges, mean degree {:.2}",
        topology.n_cells(),
        topology.region_side(),
        topology.edges().len(),
        topology.mean_degree()
    );
    for (k, count) in topology.load_histogram() {
        println!("  load {k}: {count} cells");
    }
    println!("written to {}", path.display());
    Ok(topology)
}

fn main() -> spectrum_game::Result<()> {
    run_example().map(|_| ())
}

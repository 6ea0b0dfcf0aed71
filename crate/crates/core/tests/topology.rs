use spectrum_game::{generate_topology, DeploymentParams, Error, NetworkTopology};

fn interior_degrees(t: &NetworkTopology) -> Vec<usize> {
    let side = t.region_side();
    let d0 = t.interference_distance();
    (0..t.n_cells())
        .filter(|&n| {
            let p = t.positions()[n];
            p.x >= d0 && p.y >= d0 && p.x <= side - d0 && p.y <= side - d0
        })
        .map(|n| t.degree(n))
        .collect()
}

#[test]
fn density_is_preserved_when_the_network_grows() {
    let base = DeploymentParams::default();
    let mut means = Vec::new();
    for n in [20, 45, 80] {
        let params = base.with_cells(n);
        let side = params.region_side();
        let density = n as f64 / (side * side);
        assert!((density - 20.0 / 200.0_f64.powi(2)).abs() < 1e-12);

        let mut degrees = Vec::new();
        for seed in 0..100 {
            let t = generate_topology(&params, seed).unwrap();
            assert_eq!(t.n_cells(), n);
            assert!(t
                .positions()
                .iter()
                .all(|p| (0.0..=side).contains(&p.x) && (0.0..=side).contains(&p.y)));
            degrees.extend(interior_degrees(&t));
        }
        means.push(degrees.iter().sum::<usize>() as f64 / degrees.len() as f64);
    }
    let lo = means.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = means.iter().cloned().fold(0.0, f64::max);
    assert!(hi / lo <= 1.10, "interior mean degrees {means:?}");
}

#[test]
fn loads_are_drawn_from_the_load_set() {
    let params = DeploymentParams::default();
    let mut seen = [false; 4];
    for seed in 0..20 {
        let t = generate_topology(&params, seed).unwrap();
        for &k in t.loads() {
            assert!((1..=3).contains(&k));
            seen[k] = true;
        }
    }
    assert_eq!(seen, [false, true, true, true]);
}

#[test]
fn same_seed_same_topology() {
    let params = DeploymentParams::default();
    assert_eq!(
        generate_topology(&params, 5).unwrap(),
        generate_topology(&params, 5).unwrap()
    );
    assert_ne!(
        generate_topology(&params, 5).unwrap(),
        generate_topology(&params, 6).unwrap()
    );
}

#[test]
fn file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.txt");
    let t = generate_topology(&DeploymentParams::default(), 3).unwrap();
    t.save_file(&path).unwrap();
    assert_eq!(NetworkTopology::load_file(&path).unwrap(), t);
}

#[test]
fn edge_list_inconsistent_with_positions_is_rejected() {
    let t = generate_topology(&DeploymentParams::default(), 3).unwrap();
    let text = t.to_text();
    let (head, _) = text.split_once("edges ").unwrap();
    let tampered = format!("{head}edges 0\n");
    if t.edges().is_empty() {
        return;
    }
    assert!(matches!(
        NetworkTopology::from_text(&tampered),
        Err(Error::Parse { .. } | Error::Validation(_))
    ));
}

#[test]
fn out_of_range_neighbor_query_is_an_error() {
    let t = generate_topology(&DeploymentParams::default(), 3).unwrap();
    assert!(matches!(
        t.neighbors(20),
        Err(Error::IndexOutOfRange {
            index: 20,
            n_cells: 20
        })
    ));
}

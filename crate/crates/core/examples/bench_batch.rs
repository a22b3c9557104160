//! A small benchmark batch on the downsized warehouse with a node budget,
//! summarised the same way the `bench` subcommand does it.

use tmapf::bench::{run_batch, summarize, summary_json, write_records, Algorithm, BenchCase, BenchConfig};
use tmapf::io::{generate_scenario, generate_warehouse, MoverStartPolicy, WarehouseLayout, WarehouseProfile};

fn main() {
    let map = generate_warehouse(WarehouseProfile::Custom(WarehouseLayout::DOWNSIZED), 0).unwrap();
    let mut cases = Vec::new();
    for n in [4, 8] {
        for seed in 0..4 {
            let scen = generate_scenario(&map, n, map.movables.len(), seed, MoverStartPolicy::UnderShelf).unwrap();
            cases.push(BenchCase {
                id: format!("downsized-{n}-{seed}"),
                map: "downsized".into(),
                seed: Some(seed),
                problem: scen.to_problem(&map).unwrap(),
            });
        }
    }
    let config = BenchConfig {
        algorithms: Algorithm::ALL.to_vec(),
        node_limit: Some(300),
        validate: true,
        ..Default::default()
    };
    let records = run_batch(&cases, &config);
    write_records(&records, std::io::stdout()).unwrap();
    println!("\n{}", summary_json(&summarize(&records)));
}

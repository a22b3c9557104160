//! Generates the small warehouse and a few reproducible scenarios on it.

use tmapf::io::{
    emit_map, emit_scenario, generate_scenario, generate_warehouse, workstation_cells, MoverStartPolicy,
    WarehouseProfile,
};

fn main() {
    let map = generate_warehouse(WarehouseProfile::Small, 0).unwrap();
    print!("{}", emit_map(&map));
    println!(
        "\n{} movable shelves, {} free cells, {} workstation cells on the ring",
        map.movables.len(),
        map.free_cells().len(),
        workstation_cells(&map).len()
    );
    for (seed, policy) in [(1, MoverStartPolicy::UnderShelf), (1, MoverStartPolicy::UniformFree)] {
        let scen = generate_scenario(&map, 4, map.movables.len(), seed, policy).unwrap();
        let text = emit_scenario(&scen);
        println!("\n--- seed {seed}, {policy} ---");
        for line in text.lines().take(8) {
            println!("{line}");
        }
        println!("...");
        assert_eq!(
            text,
            emit_scenario(&generate_scenario(&map, 4, map.movables.len(), seed, policy).unwrap())
        );
    }
}

use super::{IoError, MapData};
use crate::grid::{Cell, Graph, Vertex};

/// Geometry of a shelf warehouse. Shelf rows are one cell tall and two rows
/// apart, so every pair of neighbouring shelves encloses a one-cell aisle.
/// Each row is cut into `blocks` segments by vertical cross aisles, and one
/// movable obstacle sits in the middle of every segment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WarehouseLayout {
    pub height: u32,
    pub width: u32,
    pub shelf_rows: u32,
    pub blocks: u32,
    pub block_width: u32,
    pub cross_aisle: u32,
}

impl WarehouseLayout {
    pub const SMALL: WarehouseLayout = WarehouseLayout {
        height: 24,
        width: 47,
        shelf_rows: 10,
        blocks: 2,
        block_width: 20,
        cross_aisle: 3,
    };
    pub const LARGE: WarehouseLayout = WarehouseLayout {
        height: 32,
        width: 75,
        shelf_rows: 14,
        blocks: 3,
        block_width: 21,
        cross_aisle: 3,
    };
    /// Desk-scale map used by the trend experiments: 12x23, three shelf
    /// rows (four aisles counting the outer ones) and six movables.
    pub const DOWNSIZED: WarehouseLayout = WarehouseLayout {
        height: 12,
        width: 23,
        shelf_rows: 3,
        blocks: 2,
        block_width: 8,
        cross_aisle: 3,
    };

    pub fn movable_count(&self) -> u32 {
        self.shelf_rows * self.blocks
    }

    fn check(&self) -> Result<(), IoError> {
        let bad = |m: String| Err(IoError::Config(m));
        if self.shelf_rows == 0 || self.blocks == 0 || self.block_width == 0 {
            return bad("a warehouse needs at least one shelf row, block and column".into());
        }
        if self.blocks > 1 && self.cross_aisle == 0 {
            return bad("blocks must be separated by a cross aisle".into());
        }
        let span_x = self.blocks * self.block_width + (self.blocks - 1) * self.cross_aisle;
        let span_y = 2 * self.shelf_rows - 1;
        // keep a free ring of at least one cell for the workstations
        if span_x + 2 > self.width {
            return bad(format!(
                "shelves need {} columns, the map has {}",
                span_x + 2,
                self.width
            ));
        }
        if span_y + 2 > self.height {
            return bad(format!("shelves need {} rows, the map has {}", span_y + 2, self.height));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WarehouseProfile {
    Small,
    Large,
    Custom(WarehouseLayout),
}

impl WarehouseProfile {
    pub fn layout(self) -> WarehouseLayout {
        match self {
            WarehouseProfile::Small => WarehouseLayout::SMALL,
            WarehouseProfile::Large => WarehouseLayout::LARGE,
            WarehouseProfile::Custom(l) => l,
        }
    }
}

/// Builds the shelf map for `profile`, centred on the grid.
///
/// The layout is fully determined by the profile. `seed` is accepted so that
/// callers can treat maps and scenarios alike, but it does not change the map.
pub fn generate_warehouse(profile: WarehouseProfile, seed: u64) -> Result<MapData, IoError> {
    let _ = seed;
    let l = profile.layout();
    l.check()?;
    let span_x = l.blocks * l.block_width + (l.blocks - 1) * l.cross_aisle;
    let span_y = 2 * l.shelf_rows - 1;
    let left = (l.width - span_x) / 2;
    let top = (l.height - span_y) / 2;
    let mut graph = Graph::new(l.width, l.height);
    let mut movables = Vec::new();
    for r in 0..l.shelf_rows {
        let y = top + 2 * r;
        for b in 0..l.blocks {
            let x0 = left + b * (l.block_width + l.cross_aisle);
            let middle = x0 + l.block_width / 2;
            for x in x0..x0 + l.block_width {
                let v = graph.vertex(Cell::new(x, y)).expect("inside the map");
                if x == middle {
                    movables.push(v);
                } else {
                    graph.set_static(v, true);
                }
            }
        }
    }
    movables.sort();
    Ok(MapData { graph, movables })
}

/// Free cells on the outer ring of the map, row-major.
pub fn workstation_cells(map: &MapData) -> Vec<Vertex> {
    let g = &map.graph;
    map.free_cells()
        .into_iter()
        .filter(|&v| {
            let c = g.cell(v);
            c.x == 0 || c.y == 0 || c.x + 1 == g.width() || c.y + 1 == g.height()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::{emit_map, parse_map};

    fn count(map: &MapData) -> (usize, usize) {
        let statics = map.graph.vertices().filter(|&v| map.graph.is_static(v)).count();
        (statics, map.movables.len())
    }

    #[test]
    fn small_and_large_match_the_published_sizes() {
        let s = generate_warehouse(WarehouseProfile::Small, 0).unwrap();
        assert_eq!((s.graph.height(), s.graph.width()), (24, 47));
        assert_eq!(count(&s).1, 20);
        let l = generate_warehouse(WarehouseProfile::Large, 0).unwrap();
        assert_eq!((l.graph.height(), l.graph.width()), (32, 75));
        assert_eq!(count(&l).1, 42);
    }

    #[test]
    fn movables_sit_mid_shelf() {
        let m = generate_warehouse(WarehouseProfile::Custom(WarehouseLayout::DOWNSIZED), 0).unwrap();
        assert_eq!(count(&m), (3 * 2 * 7, 6));
        for &v in &m.movables {
            let c = m.graph.cell(v);
            let left = m.graph.vertex(Cell::new(c.x - 1, c.y)).unwrap();
            let right = m.graph.vertex(Cell::new(c.x + 1, c.y)).unwrap();
            assert!(m.graph.is_static(left) && m.graph.is_static(right));
        }
    }

    #[test]
    fn perimeter_is_free() {
        let m = generate_warehouse(WarehouseProfile::Small, 0).unwrap();
        let ring = 2 * (47 + 24) - 4;
        assert_eq!(workstation_cells(&m).len(), ring);
    }

    #[test]
    fn deterministic_and_round_trips() {
        let a = emit_map(&generate_warehouse(WarehouseProfile::Large, 3).unwrap());
        let b = emit_map(&generate_warehouse(WarehouseProfile::Large, 3).unwrap());
        assert_eq!(a, b);
        assert_eq!(emit_map(&parse_map(&a).unwrap()), a);
    }

    #[test]
    fn inconsistent_custom_layout_is_rejected() {
        let l = WarehouseLayout {
            width: 10,
            ..WarehouseLayout::DOWNSIZED
        };
        assert!(matches!(
            generate_warehouse(WarehouseProfile::Custom(l), 0),
            Err(IoError::Config(_))
        ));
    }
}

use std::fmt::Write;

use super::{parse_error, IoError};
use crate::grid::{Cell, Graph, Vertex};

/// A parsed map: the grid with its static obstacles, plus the start cells of
/// the movable obstacles in row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapData {
    pub graph: Graph,
    pub movables: Vec<Vertex>,
}

impl MapData {
    /// Cells that are neither static nor movable obstacles, row-major.
    pub fn free_cells(&self) -> Vec<Vertex> {
        self.graph
            .vertices()
            .filter(|&v| !self.graph.is_static(v) && !self.movables.contains(&v))
            .collect()
    }

    pub fn movable_cells(&self) -> Vec<Cell> {
        self.movables.iter().map(|&v| self.graph.cell(v)).collect()
    }
}

/// Parses a MovingAI-style map. `.` is free, `@` and `T` are static
/// obstacles and `M` marks a movable obstacle.
pub fn parse_map(text: &str) -> Result<MapData, IoError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end_matches('\r')));
    let mut header = |key: &str| -> Result<(usize, String), IoError> {
        let (n, line) = lines
            .next()
            .ok_or_else(|| parse_error(0, 1, format!("missing `{key}` header")))?;
        let mut parts = line.split_whitespace();
        if parts.next() != Some(key) {
            return Err(parse_error(n, 1, format!("expected `{key}` header, found {line:?}")));
        }
        let value = parts.collect::<Vec<_>>().join(" ");
        Ok((n, value))
    };
    let (n, kind) = header("type")?;
    if kind != "octile" {
        return Err(parse_error(n, 6, format!("unsupported map type {kind:?}")));
    }
    let dimension = |(n, value): (usize, String)| -> Result<u32, IoError> {
        value
            .parse::<u32>()
            .ok()
            .filter(|&d| d > 0)
            .ok_or_else(|| parse_error(n, 1, format!("bad dimension {value:?}")))
    };
    let height = dimension(header("height")?)?;
    let width = dimension(header("width")?)?;
    let (n, rest) = header("map")?;
    if !rest.is_empty() {
        return Err(parse_error(n, 5, "unexpected text after `map`"));
    }

    let mut graph = Graph::new(width, height);
    let mut movables = Vec::new();
    let mut rows = 0u32;
    for (n, line) in lines {
        if rows == height {
            if line.trim().is_empty() {
                continue;
            }
            return Err(parse_error(n, 1, format!("more than {height} rows")));
        }
        let chars: Vec<char> = line.chars().collect();
        if chars.len() != width as usize {
            return Err(parse_error(
                n,
                chars.len().min(width as usize) + 1,
                format!("row {rows} has {} cells, expected {width}", chars.len()),
            ));
        }
        for (x, &ch) in chars.iter().enumerate() {
            let v = graph.vertex(Cell::new(x as u32, rows)).expect("in bounds");
            match ch {
                '.' => {}
                '@' | 'T' => graph.set_static(v, true),
                'M' => movables.push(v),
                other => return Err(parse_error(n, x + 1, format!("unknown map character {other:?}"))),
            }
        }
        rows += 1;
    }
    if rows != height {
        return Err(parse_error(0, 1, format!("map has {rows} rows, header says {height}")));
    }
    Ok(MapData { graph, movables })
}

/// Canonical text of a map; static obstacles are written as `@`.
pub fn emit_map(map: &MapData) -> String {
    let g = &map.graph;
    let mut out = String::new();
    let _ = write!(out, "type octile\nheight {}\nwidth {}\nmap\n", g.height(), g.width());
    for y in 0..g.height() {
        for x in 0..g.width() {
            let v = g.vertex(Cell::new(x, y)).expect("in bounds");
            out.push(if map.movables.contains(&v) {
                'M'
            } else if g.is_static(v) {
                '@'
            } else {
                '.'
            });
        }
        out.push('\n');
    }
    out
}

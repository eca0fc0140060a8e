use serde::{Deserialize, Serialize};

use super::{Cell, GridError, Shape, Vertex};

/// Wire format for shapes: `{"vertices": [[x, y], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShapeJson {
    pub vertices: Vec<[i32; 2]>,
}

pub(super) fn parse_ascii(text: &str) -> Result<Shape, GridError> {
    let rows: Vec<&str> = text.lines().map(str::trim_end).collect();
    // Drop trailing blank lines so a final newline does not add a row.
    let height = rows.iter().rposition(|r| !r.is_empty()).map_or(0, |i| i + 1);
    let mut cells = Vec::new();
    for (r, row) in rows[..height].iter().enumerate() {
        for (c, ch) in row.chars().enumerate() {
            match ch {
                '#' => cells.push(Cell::new(c as i32, (height - r - 1) as i32)),
                '.' | ' ' => {}
                _ => return Err(GridError::BadCharacter { line: r + 1, column: c + 1, ch }),
            }
        }
    }
    Shape::from_cells(cells)
}

pub(super) fn from_json(text: &str) -> Result<Shape, GridError> {
    let parsed: ShapeJson = serde_json::from_str(text).map_err(|e| GridError::Json(e.to_string()))?;
    Shape::from_vertices(parsed.vertices.into_iter().map(|[x, y]| Vertex::new(x, y)))
}

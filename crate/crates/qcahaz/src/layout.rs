//! QCA cell-level layouts: geometry parameters, cells, primitive generators,
//! validation, and the line-based `.qcl` file format.
//!
//! Coordinates are nanometers. Cells sit on the pitch grid; positive y points
//! north. The `.qcl` format is UTF-8 and line-based: a `qcl 1` header,
//! `param <name> <value>` lines for the geometry, then one `cell` line per
//! cell. `#` starts a comment; the first comment line is read back as the
//! layout name so that save/load round-trips the full structure.

use std::fmt;

use thiserror::Error;

/// Default cutoff distance beyond which cell pairs are ignored (nm).
pub const DEFAULT_RADIUS_OF_EFFECT: f64 = 65.0;

/// Cell and dot geometry shared by a layout (all nm).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    /// Cell side length.
    pub cell_size: f64,
    /// Quantum-dot diameter.
    pub dot_diameter: f64,
    /// Center-to-center distance between adjacent dots in a cell.
    pub dot_spacing: f64,
    /// Center-to-center distance between adjacent cells.
    pub pitch: f64,
}

impl Default for Geometry {
    fn default() -> Self {
        Geometry {
            cell_size: 18.0,
            dot_diameter: 5.0,
            dot_spacing: 9.0,
            pitch: 20.0,
        }
    }
}

impl Geometry {
    pub fn validate(&self) -> Result<(), LayoutError> {
        let all_positive = self.cell_size > 0.0
            && self.dot_diameter > 0.0
            && self.dot_spacing > 0.0
            && self.pitch > 0.0;
        if !all_positive {
            return Err(LayoutError::BadGeometry(
                "all geometry parameters must be positive".into(),
            ));
        }
        if self.dot_spacing >= self.cell_size {
            return Err(LayoutError::BadGeometry(
                "dot_spacing must be smaller than cell_size".into(),
            ));
        }
        if self.pitch < self.cell_size {
            return Err(LayoutError::BadGeometry(
                "pitch must be at least cell_size".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rotation {
    /// Dots at the cell corners ("90 degree" cell).
    Standard,
    /// Dots rotated 45 degrees (mid-edge positions).
    Rotated45,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CellRole {
    Normal,
    /// Driver cell pinned to polarization +1 or -1 for the whole run.
    Fixed(i8),
    Input(String),
    Output(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct QcaCell {
    pub x: f64,
    pub y: f64,
    pub rotation: Rotation,
    pub zone: u8,
    pub role: CellRole,
}

impl QcaCell {
    pub fn normal(x: f64, y: f64, zone: u8) -> Self {
        QcaCell {
            x,
            y,
            rotation: Rotation::Standard,
            zone,
            role: CellRole::Normal,
        }
    }

    pub fn distance_to(&self, other: &QcaCell) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2)).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QcaLayout {
    pub geometry: Geometry,
    pub cells: Vec<QcaCell>,
    pub name: String,
}

impl QcaLayout {
    pub fn new(name: impl Into<String>, geometry: Geometry, cells: Vec<QcaCell>) -> Self {
        QcaLayout {
            geometry,
            cells,
            name: name.into(),
        }
    }

    pub fn input_labels(&self) -> Vec<&str> {
        self.cells
            .iter()
            .filter_map(|c| match &c.role {
                CellRole::Input(l) => Some(l.as_str()),
                _ => None,
            })
            .collect()
    }

    pub fn output_labels(&self) -> Vec<&str> {
        self.cells
            .iter()
            .filter_map(|c| match &c.role {
                CellRole::Output(l) => Some(l.as_str()),
                _ => None,
            })
            .collect()
    }

    pub fn find_output(&self, label: &str) -> Option<usize> {
        self.cells
            .iter()
            .position(|c| matches!(&c.role, CellRole::Output(l) if l == label))
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum LayoutError {
    #[error("bad geometry: {0}")]
    BadGeometry(String),
    #[error("wire endpoints must be axis-aligned (horizontal or vertical)")]
    NotAxisAligned,
    #[error("zone schedule covers {scheduled} cells but the run has {run}")]
    ScheduleMismatch { scheduled: usize, run: usize },
    #[error("zone {0} is out of range 0-3")]
    ZoneOutOfRange(u8),
}

/// Validation findings. These are data, not failures: an empty list means
/// the layout is well-formed.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    OverlappingCells { a: usize, b: usize },
    ZoneOutOfRange { cell: usize, zone: u8 },
    BadFixedPolarization { cell: usize, polarization: i8 },
    DuplicateInputLabel(String),
    DuplicateOutputLabel(String),
    EmptyLabel { cell: usize },
    IsolatedCell { cell: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::OverlappingCells { a, b } => {
                write!(f, "cells {a} and {b} share a center")
            }
            Violation::ZoneOutOfRange { cell, zone } => {
                write!(f, "cell {cell} has zone {zone} outside 0-3")
            }
            Violation::BadFixedPolarization { cell, polarization } => {
                write!(f, "fixed cell {cell} has polarization {polarization}, not +1/-1")
            }
            Violation::DuplicateInputLabel(l) => write!(f, "duplicate input label {l:?}"),
            Violation::DuplicateOutputLabel(l) => write!(f, "duplicate output label {l:?}"),
            Violation::EmptyLabel { cell } => write!(f, "cell {cell} has an empty label"),
            Violation::IsolatedCell { cell } => write!(
                f,
                "cell {cell} is beyond the radius of effect of every other cell"
            ),
        }
    }
}

/// Checks overlap, zone range, fixed polarizations, label uniqueness, and
/// connectivity (every non-fixed cell within [`DEFAULT_RADIUS_OF_EFFECT`] of
/// at least one other cell).
pub fn validate(layout: &QcaLayout) -> Vec<Violation> {
    let mut violations = Vec::new();
    let cells = &layout.cells;

    for (i, c) in cells.iter().enumerate() {
        for (j, d) in cells.iter().enumerate().skip(i + 1) {
            if c.distance_to(d) < 1e-6 {
                violations.push(Violation::OverlappingCells { a: i, b: j });
            }
        }
        if c.zone > 3 {
            violations.push(Violation::ZoneOutOfRange {
                cell: i,
                zone: c.zone,
            });
        }
        match &c.role {
            CellRole::Fixed(p) if *p != 1 && *p != -1 => {
                violations.push(Violation::BadFixedPolarization {
                    cell: i,
                    polarization: *p,
                });
            }
            CellRole::Input(l) | CellRole::Output(l) if l.is_empty() => {
                violations.push(Violation::EmptyLabel { cell: i });
            }
            _ => {}
        }
    }

    let mut seen_inputs: Vec<&str> = Vec::new();
    for l in layout.input_labels() {
        if seen_inputs.contains(&l) {
            violations.push(Violation::DuplicateInputLabel(l.to_string()));
        } else {
            seen_inputs.push(l);
        }
    }
    let mut seen_outputs: Vec<&str> = Vec::new();
    for l in layout.output_labels() {
        if seen_outputs.contains(&l) {
            violations.push(Violation::DuplicateOutputLabel(l.to_string()));
        } else {
            seen_outputs.push(l);
        }
    }

    if cells.len() > 1 {
        for (i, c) in cells.iter().enumerate() {
            if matches!(c.role, CellRole::Fixed(_)) {
                continue;
            }
            let connected = cells
                .iter()
                .enumerate()
                .any(|(j, d)| j != i && c.distance_to(d) <= DEFAULT_RADIUS_OF_EFFECT);
            if !connected {
                violations.push(Violation::IsolatedCell { cell: i });
            }
        }
    }

    violations
}

/// Colinear run of standard cells between two grid points at pitch spacing.
/// The zone schedule is a list of `(cell count, zone)` segments whose counts
/// must sum to the run length in cells.
pub fn place_wire(
    start: (f64, f64),
    end: (f64, f64),
    zone_schedule: &[(usize, u8)],
    geom: &Geometry,
) -> Result<Vec<QcaCell>, LayoutError> {
    let dx = end.0 - start.0;
    let dy = end.1 - start.1;
    if dx.abs() > 1e-9 && dy.abs() > 1e-9 {
        return Err(LayoutError::NotAxisAligned);
    }
    let length = dx.abs().max(dy.abs());
    let steps = (length / geom.pitch).round() as usize;
    let count = steps + 1;

    let scheduled: usize = zone_schedule.iter().map(|&(n, _)| n).sum();
    if scheduled != count {
        return Err(LayoutError::ScheduleMismatch {
            scheduled,
            run: count,
        });
    }
    for &(_, zone) in zone_schedule {
        if zone > 3 {
            return Err(LayoutError::ZoneOutOfRange(zone));
        }
    }

    let (sx, sy) = (
        if dx == 0.0 { 0.0 } else { dx.signum() },
        if dy == 0.0 { 0.0 } else { dy.signum() },
    );
    let mut zones = Vec::with_capacity(count);
    for &(n, zone) in zone_schedule {
        zones.extend(std::iter::repeat(zone).take(n));
    }
    Ok((0..count)
        .map(|i| {
            QcaCell::normal(
                start.0 + sx * geom.pitch * i as f64,
                start.1 + sy * geom.pitch * i as f64,
                zones[i],
            )
        })
        .collect())
}

/// Five-cell plus-shaped majority template: three input ports (west, north,
/// south), the device cell, and the east output port, all in one zone.
/// Returned in that order.
pub fn place_majority(center: (f64, f64), zone: u8, geom: &Geometry) -> Vec<QcaCell> {
    let (cx, cy) = center;
    let p = geom.pitch;
    vec![
        QcaCell::normal(cx - p, cy, zone), // west port
        QcaCell::normal(cx, cy - p, zone), // north port (screen orientation)
        QcaCell::normal(cx, cy + p, zone), // south port
        QcaCell::normal(cx, cy, zone),     // device
        QcaCell::normal(cx + p, cy, zone), // east output port
    ]
}

/// Two-cell inverter template: the input cell plus a standard cell offset by
/// one pitch in x and one in y. Corner-to-corner coupling anti-aligns the
/// second cell, so it carries the complement of the input.
pub fn place_inverter(input_point: (f64, f64), zone: u8, geom: &Geometry) -> Vec<QcaCell> {
    let (x, y) = input_point;
    vec![
        QcaCell::normal(x, y, zone),
        QcaCell::normal(x + geom.pitch, y + geom.pitch, zone),
    ]
}

#[derive(Debug, Error, PartialEq)]
pub enum QclError {
    #[error("line 1: missing or unsupported header (expected \"qcl 1\")")]
    BadHeader,
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: unknown role token {token:?}")]
    UnknownRole { line: usize, token: String },
    #[error("line {line}: unknown parameter {name:?}")]
    UnknownParam { line: usize, name: String },
    #[error("invalid geometry: {0}")]
    BadGeometry(String),
}

/// Serializes a layout to `.qcl` text. Numbers carry three decimal places;
/// the layout name is emitted as the first comment line.
pub fn save_layout(layout: &QcaLayout) -> String {
    let mut out = String::from("qcl 1\n");
    if !layout.name.is_empty() {
        out.push_str(&format!("# {}\n", layout.name));
    }
    let g = &layout.geometry;
    out.push_str(&format!("param cell_size {:.3}\n", g.cell_size));
    out.push_str(&format!("param dot_diameter {:.3}\n", g.dot_diameter));
    out.push_str(&format!("param dot_spacing {:.3}\n", g.dot_spacing));
    out.push_str(&format!("param pitch {:.3}\n", g.pitch));
    for c in &layout.cells {
        let rot = match c.rotation {
            Rotation::Standard => "0",
            Rotation::Rotated45 => "45",
        };
        let role = match &c.role {
            CellRole::Normal => "normal".to_string(),
            CellRole::Fixed(1) => "fixed:+1".to_string(),
            CellRole::Fixed(p) => format!("fixed:{p}"),
            CellRole::Input(l) => format!("input:{l}"),
            CellRole::Output(l) => format!("output:{l}"),
        };
        out.push_str(&format!(
            "cell {:.3} {:.3} {} {} {}\n",
            c.x, c.y, rot, c.zone, role
        ));
    }
    out
}

/// Parses `.qcl` text produced by [`save_layout`] (or written by hand).
pub fn load_layout(text: &str) -> Result<QcaLayout, QclError> {
    let mut lines = text.lines().enumerate();
    let header = lines
        .next()
        .map(|(_, l)| l.trim())
        .ok_or(QclError::BadHeader)?;
    if header != "qcl 1" {
        return Err(QclError::BadHeader);
    }

    let mut geometry = Geometry::default();
    let mut cells = Vec::new();
    let mut name = String::new();
    let mut saw_comment = false;

    for (idx, raw) in lines {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if !saw_comment {
                name = comment.trim().to_string();
                saw_comment = true;
            }
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[0] {
            "param" => {
                if fields.len() != 3 {
                    return Err(QclError::Malformed {
                        line: line_no,
                        msg: "expected: param <name> <value>".into(),
                    });
                }
                let value: f64 = fields[2].parse().map_err(|_| QclError::Malformed {
                    line: line_no,
                    msg: format!("bad numeric value {:?}", fields[2]),
                })?;
                match fields[1] {
                    "cell_size" => geometry.cell_size = value,
                    "dot_diameter" => geometry.dot_diameter = value,
                    "dot_spacing" => geometry.dot_spacing = value,
                    "pitch" => geometry.pitch = value,
                    other => {
                        return Err(QclError::UnknownParam {
                            line: line_no,
                            name: other.into(),
                        })
                    }
                }
            }
            "cell" => {
                if fields.len() != 6 {
                    return Err(QclError::Malformed {
                        line: line_no,
                        msg: "expected: cell <x> <y> <rot> <zone> <role>".into(),
                    });
                }
                let parse_num = |s: &str| -> Result<f64, QclError> {
                    s.parse().map_err(|_| QclError::Malformed {
                        line: line_no,
                        msg: format!("bad numeric value {s:?}"),
                    })
                };
                let x = parse_num(fields[1])?;
                let y = parse_num(fields[2])?;
                let rotation = match fields[3] {
                    "0" => Rotation::Standard,
                    "45" => Rotation::Rotated45,
                    other => {
                        return Err(QclError::Malformed {
                            line: line_no,
                            msg: format!("rotation must be 0 or 45, found {other:?}"),
                        })
                    }
                };
                let zone: u8 = fields[4].parse().map_err(|_| QclError::Malformed {
                    line: line_no,
                    msg: format!("bad zone {:?}", fields[4]),
                })?;
                if zone > 3 {
                    return Err(QclError::Malformed {
                        line: line_no,
                        msg: format!("zone {zone} out of range 0-3"),
                    });
                }
                let role = match fields[5] {
                    "normal" => CellRole::Normal,
                    "fixed:+1" | "fixed:1" => CellRole::Fixed(1),
                    "fixed:-1" => CellRole::Fixed(-1),
                    other => {
                        if let Some(label) = other.strip_prefix("input:") {
                            if label.is_empty() {
                                return Err(QclError::Malformed {
                                    line: line_no,
                                    msg: "empty input label".into(),
                                });
                            }
                            CellRole::Input(label.to_string())
                        } else if let Some(label) = other.strip_prefix("output:") {
                            if label.is_empty() {
                                return Err(QclError::Malformed {
                                    line: line_no,
                                    msg: "empty output label".into(),
                                });
                            }
                            CellRole::Output(label.to_string())
                        } else {
                            return Err(QclError::UnknownRole {
                                line: line_no,
                                token: other.to_string(),
                            });
                        }
                    }
                };
                cells.push(QcaCell {
                    x,
                    y,
                    rotation,
                    zone,
                    role,
                });
            }
            other => {
                return Err(QclError::Malformed {
                    line: line_no,
                    msg: format!("unknown record {other:?}"),
                })
            }
        }
    }

    geometry
        .validate()
        .map_err(|e| QclError::BadGeometry(e.to_string()))?;
    Ok(QcaLayout {
        geometry,
        cells,
        name,
    })
}

//! Electrostatic interaction and kink energies between QCA cells.
//!
//! Each cell contributes its two excess electrons, placed on the diagonal
//! selected by the polarization (P = +1 occupies the top-right/bottom-left
//! diagonal of a standard cell; P = -1 the other one). The pair energy is
//! `23.04e-29 / (eps_r * r)` joules with `r` in meters; the constant is the
//! Coulomb constant times the squared electron charge, stored as a single
//! primitive. Kink energy depends only on geometry, polarizations, and the
//! relative permittivity; there is deliberately no temperature anywhere in
//! this module.

use thiserror::Error;

use crate::layout::{Geometry, QcaCell, QcaLayout, Rotation};

/// Coulomb constant times e^2, in joule-meters: k*e^2 = 9e9 * (1.6e-19)^2.
pub const COULOMB_E2_JOULE_METER: f64 = 23.04e-29;

/// Separations below this (nm) count as coincident.
const COINCIDENT_EPS_NM: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyParams {
    /// The product k*e^2 in joule-meters.
    pub coulomb_e2: f64,
    pub relative_permittivity: f64,
}

impl Default for EnergyParams {
    fn default() -> Self {
        EnergyParams {
            coulomb_e2: COULOMB_E2_JOULE_METER,
            relative_permittivity: 1.0,
        }
    }
}

impl EnergyParams {
    pub fn with_permittivity(relative_permittivity: f64) -> Self {
        EnergyParams {
            relative_permittivity,
            ..Default::default()
        }
    }
}

/// A point in the layout plane, nanometers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance_to(&self, other: &Point) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2)).sqrt()
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum EnergyError {
    #[error("polarization must be +1 or -1, found {0}")]
    BadPolarization(i8),
    #[error("coincident charge positions")]
    CoincidentPoints,
    #[error("coincident cells")]
    CoincidentCells,
    #[error("neighborhood has no driver cells")]
    EmptyNeighborhood,
    #[error("no output cell labeled {0:?}")]
    MissingOutput(String),
    #[error("output cell {0:?} has no neighbor within the radius of effect")]
    IsolatedOutput(String),
}

/// The two electron positions of a cell at the given polarization.
///
/// Dots sit at offsets of half the dot spacing from the center; the
/// polarization picks the occupied diagonal. Rotated cells use the same
/// diagonals turned by 45 degrees, which lands the electrons on axis-aligned
/// dot pairs.
pub fn electron_positions(
    cell: &QcaCell,
    polarization: i8,
    geom: &Geometry,
) -> Result<[Point; 2], EnergyError> {
    if polarization != 1 && polarization != -1 {
        return Err(EnergyError::BadPolarization(polarization));
    }
    let h = geom.dot_spacing / 2.0;
    let (a, b) = if polarization == 1 {
        (Point::new(h, h), Point::new(-h, -h))
    } else {
        (Point::new(-h, h), Point::new(h, -h))
    };
    let rotate = |p: Point| match cell.rotation {
        Rotation::Standard => p,
        Rotation::Rotated45 => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            Point::new((p.x - p.y) * s, (p.x + p.y) * s)
        }
    };
    let (a, b) = (rotate(a), rotate(b));
    Ok([
        Point::new(cell.x + a.x, cell.y + a.y),
        Point::new(cell.x + b.x, cell.y + b.y),
    ])
}

/// Coulomb energy between two electrons, in joules.
pub fn pair_interaction(
    p1: &Point,
    p2: &Point,
    params: &EnergyParams,
) -> Result<f64, EnergyError> {
    let r_nm = p1.distance_to(p2);
    if r_nm < COINCIDENT_EPS_NM {
        return Err(EnergyError::CoincidentPoints);
    }
    Ok(params.coulomb_e2 / (params.relative_permittivity * r_nm * 1e-9))
}

/// A cell with a polarization and the electron positions it implies.
#[derive(Debug, Clone, PartialEq)]
pub struct CellChargeConfig {
    pub cell: QcaCell,
    pub polarization: i8,
    pub electron_positions: [Point; 2],
}

impl CellChargeConfig {
    pub fn new(cell: &QcaCell, polarization: i8, geom: &Geometry) -> Result<Self, EnergyError> {
        Ok(CellChargeConfig {
            cell: cell.clone(),
            polarization,
            electron_positions: electron_positions(cell, polarization, geom)?,
        })
    }
}

/// Total electron-electron energy between two cells: the sum over the four
/// electron pairs.
pub fn cells_interaction(
    a: &CellChargeConfig,
    b: &CellChargeConfig,
    params: &EnergyParams,
) -> Result<f64, EnergyError> {
    let mut total = 0.0;
    for pa in &a.electron_positions {
        for pb in &b.electron_positions {
            total += pair_interaction(pa, pb, params).map_err(|e| match e {
                EnergyError::CoincidentPoints => EnergyError::CoincidentCells,
                other => other,
            })?;
        }
    }
    Ok(total)
}

/// Kink energy of a cell pair: interaction with opposite polarizations minus
/// interaction with matching polarizations, cell `a` held at +1. Strictly
/// positive for side-by-side standard cells (matching is favored).
pub fn kink_energy(
    a: &QcaCell,
    b: &QcaCell,
    geom: &Geometry,
    params: &EnergyParams,
) -> Result<f64, EnergyError> {
    let a_plus = CellChargeConfig::new(a, 1, geom)?;
    let b_plus = CellChargeConfig::new(b, 1, geom)?;
    let b_minus = CellChargeConfig::new(b, -1, geom)?;
    let opp = cells_interaction(&a_plus, &b_minus, params)?;
    let same = cells_interaction(&a_plus, &b_plus, params)?;
    Ok(opp - same)
}

/// Polarization-averaged coupling: the kink energy averaged over both
/// reference polarizations of cell `a`.
///
/// For cells offset along a diagonal, the plain kink energy depends on which
/// diagonal the pair sits on (the two-electron charge model has a linear
/// term on top of the bilinear coupling). Averaging removes that term, so
/// both diagonals couple identically; the bistable engine uses this value.
/// At side-by-side offsets it equals [`kink_energy`] exactly.
pub fn cell_coupling(
    a: &QcaCell,
    b: &QcaCell,
    geom: &Geometry,
    params: &EnergyParams,
) -> Result<f64, EnergyError> {
    let a_plus = CellChargeConfig::new(a, 1, geom)?;
    let a_minus = CellChargeConfig::new(a, -1, geom)?;
    let b_plus = CellChargeConfig::new(b, 1, geom)?;
    let b_minus = CellChargeConfig::new(b, -1, geom)?;
    let opp = cells_interaction(&a_plus, &b_minus, params)?
        + cells_interaction(&a_minus, &b_plus, params)?;
    let same = cells_interaction(&a_plus, &b_plus, params)?
        + cells_interaction(&a_minus, &b_minus, params)?;
    Ok((opp - same) / 2.0)
}

/// Total interaction of a target cell at `target_pol` with a set of driver
/// configurations.
pub fn neighborhood_energy(
    target: &QcaCell,
    target_pol: i8,
    drivers: &[CellChargeConfig],
    geom: &Geometry,
    params: &EnergyParams,
) -> Result<f64, EnergyError> {
    if drivers.is_empty() {
        return Err(EnergyError::EmptyNeighborhood);
    }
    let target_cfg = CellChargeConfig::new(target, target_pol, geom)?;
    let mut total = 0.0;
    for d in drivers {
        total += cells_interaction(&target_cfg, d, params)?;
    }
    Ok(total)
}

/// Output-stage energies: the labeled output cell against every cell within
/// `radius_nm`, with all neighbors held at +1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutputStageEnergies {
    pub e_opp: f64,
    pub e_same: f64,
    pub e_kink: f64,
}

/// Kink energy of a labeled output cell against its neighborhood:
/// `neighborhood_energy` with the target opposing all neighbors minus the
/// same quantity with the target agreeing.
pub fn output_stage_kink(
    layout: &QcaLayout,
    output_label: &str,
    radius_nm: f64,
    params: &EnergyParams,
) -> Result<OutputStageEnergies, EnergyError> {
    let idx = layout
        .find_output(output_label)
        .ok_or_else(|| EnergyError::MissingOutput(output_label.to_string()))?;
    let target = &layout.cells[idx];
    let geom = &layout.geometry;
    let drivers: Vec<CellChargeConfig> = layout
        .cells
        .iter()
        .enumerate()
        .filter(|&(j, c)| j != idx && target.distance_to(c) <= radius_nm)
        .map(|(_, c)| CellChargeConfig::new(c, 1, geom))
        .collect::<Result<_, _>>()?;
    if drivers.is_empty() {
        return Err(EnergyError::IsolatedOutput(output_label.to_string()));
    }
    let e_opp = neighborhood_energy(target, -1, &drivers, geom, params)?;
    let e_same = neighborhood_energy(target, 1, &drivers, geom, params)?;
    Ok(OutputStageEnergies {
        e_opp,
        e_same,
        e_kink: e_opp - e_same,
    })
}

/// The documented output-stage reconstruction: an output cell surrounded by
/// four drivers (west, north, south, east) at 18 nm pitch with the dots read
/// as sitting in the cell corners inset by their radius (13 nm dot spacing
/// for an 18 nm cell with 5 nm dots).
///
/// This is the closest candidate from a grid search over driver counts 3-4,
/// pitches 18/20 nm, and both dot-spacing readings: it reproduces the
/// commonly published reference values E_same = 19.497e-20 J within 0.6% and
/// E_opp = 29.211e-20 J within 1.8%. No searched candidate lands within 1%
/// of both, so the exact published pair is treated as unreachable from the
/// stated cell geometry; see the README for the full comparison table.
pub fn reference_output_stage() -> (QcaCell, Vec<QcaCell>, Geometry) {
    let geom = Geometry {
        cell_size: 18.0,
        dot_diameter: 5.0,
        dot_spacing: 13.0,
        pitch: 18.0,
    };
    let p = geom.pitch;
    let target = QcaCell::normal(0.0, 0.0, 0);
    let drivers = vec![
        QcaCell::normal(-p, 0.0, 0),
        QcaCell::normal(0.0, -p, 0),
        QcaCell::normal(0.0, p, 0),
        QcaCell::normal(p, 0.0, 0),
    ];
    (target, drivers, geom)
}

/// Energies of the [`reference_output_stage`] under the given permittivity.
pub fn reference_output_stage_energies(
    params: &EnergyParams,
) -> Result<OutputStageEnergies, EnergyError> {
    let (target, drivers, geom) = reference_output_stage();
    let configs: Vec<CellChargeConfig> = drivers
        .iter()
        .map(|c| CellChargeConfig::new(c, 1, &geom))
        .collect::<Result<_, _>>()?;
    let e_opp = neighborhood_energy(&target, -1, &configs, &geom, params)?;
    let e_same = neighborhood_energy(&target, 1, &configs, &geom, params)?;
    Ok(OutputStageEnergies {
        e_opp,
        e_same,
        e_kink: e_opp - e_same,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::QcaCell;

    fn rel_err(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    /// Independent oracle: double loop over electron pairs with its own
    /// distance and position arithmetic.
    fn oracle_cells_interaction(
        a: (f64, f64),
        pa: i8,
        b: (f64, f64),
        pb: i8,
        dot_spacing: f64,
        eps_r: f64,
    ) -> f64 {
        let h = dot_spacing / 2.0;
        let electrons = |(cx, cy): (f64, f64), p: i8| -> [(f64, f64); 2] {
            if p > 0 {
                [(cx + h, cy + h), (cx - h, cy - h)]
            } else {
                [(cx - h, cy + h), (cx + h, cy - h)]
            }
        };
        let ea = electrons(a, pa);
        let eb = electrons(b, pb);
        let mut sum = 0.0;
        for &(x1, y1) in &ea {
            for &(x2, y2) in &eb {
                let r_m = ((x1 - x2).hypot(y1 - y2)) * 1e-9;
                sum += 23.04e-29 / (eps_r * r_m);
            }
        }
        sum
    }

    #[test]
    fn pair_interaction_reference_points() {
        let params = EnergyParams::default();
        let e10 = pair_interaction(&Point::new(0.0, 0.0), &Point::new(10.0, 0.0), &params)
            .unwrap();
        assert!(rel_err(e10, 2.304e-20) < 1e-12);
        let e20 = pair_interaction(&Point::new(0.0, 0.0), &Point::new(20.0, 0.0), &params)
            .unwrap();
        assert!(rel_err(e20, 1.152e-20) < 1e-12);

        let screened = EnergyParams::with_permittivity(12.9);
        let e = pair_interaction(&Point::new(0.0, 0.0), &Point::new(10.0, 0.0), &screened)
            .unwrap();
        assert!(rel_err(e, 2.304e-20 / 12.9) < 1e-12);
    }

    #[test]
    fn coincident_points_error_not_infinity() {
        let params = EnergyParams::default();
        let p = Point::new(4.5, 4.5);
        assert_eq!(
            pair_interaction(&p, &p, &params).unwrap_err(),
            EnergyError::CoincidentPoints
        );
    }

    #[test]
    fn electron_positions_follow_the_diagonal_convention() {
        let geom = Geometry::default();
        let cell = QcaCell::normal(0.0, 0.0, 0);
        let plus = electron_positions(&cell, 1, &geom).unwrap();
        assert_eq!((plus[0].x, plus[0].y), (4.5, 4.5));
        assert_eq!((plus[1].x, plus[1].y), (-4.5, -4.5));
        let minus = electron_positions(&cell, -1, &geom).unwrap();
        assert_eq!((minus[0].x, minus[0].y), (-4.5, 4.5));
        assert_eq!((minus[1].x, minus[1].y), (4.5, -4.5));

        let rotated = QcaCell {
            rotation: Rotation::Rotated45,
            ..cell.clone()
        };
        let r = electron_positions(&rotated, 1, &geom).unwrap();
        let expect = 4.5 * std::f64::consts::SQRT_2;
        assert!(r[0].x.abs() < 1e-12 && (r[0].y - expect).abs() < 1e-12);
        assert!(r[1].x.abs() < 1e-12 && (r[1].y + expect).abs() < 1e-12);

        assert_eq!(
            electron_positions(&cell, 0, &geom).unwrap_err(),
            EnergyError::BadPolarization(0)
        );
    }

    #[test]
    fn cells_interaction_matches_bruteforce_oracle() {
        let geom = Geometry::default();
        let params = EnergyParams::default();
        let cases = [
            ((0.0, 0.0), 1, (20.0, 0.0), 1),
            ((0.0, 0.0), 1, (20.0, 0.0), -1),
            ((0.0, 0.0), -1, (0.0, 20.0), -1),
            ((0.0, 0.0), 1, (20.0, 20.0), 1),
            ((10.0, -30.0), -1, (50.0, 10.0), 1),
        ];
        for (ca, pa, cb, pb) in cases {
            let a = CellChargeConfig::new(&QcaCell::normal(ca.0, ca.1, 0), pa, &geom).unwrap();
            let b = CellChargeConfig::new(&QcaCell::normal(cb.0, cb.1, 0), pb, &geom).unwrap();
            let got = cells_interaction(&a, &b, &params).unwrap();
            let want = oracle_cells_interaction(ca, pa, cb, pb, geom.dot_spacing, 1.0);
            assert!(rel_err(got, want) < 1e-12, "case {ca:?} {pa} {cb:?} {pb}");
        }
    }

    #[test]
    fn interaction_is_symmetric_and_translation_invariant() {
        let geom = Geometry::default();
        let params = EnergyParams::default();
        let a = CellChargeConfig::new(&QcaCell::normal(0.0, 0.0, 0), 1, &geom).unwrap();
        let b = CellChargeConfig::new(&QcaCell::normal(20.0, 0.0, 0), 1, &geom).unwrap();
        let ab = cells_interaction(&a, &b, &params).unwrap();
        let ba = cells_interaction(&b, &a, &params).unwrap();
        assert_eq!(ab, ba);

        let at = CellChargeConfig::new(&QcaCell::normal(100.0, 100.0, 0), 1, &geom).unwrap();
        let bt = CellChargeConfig::new(&QcaCell::normal(120.0, 100.0, 0), 1, &geom).unwrap();
        let translated = cells_interaction(&at, &bt, &params).unwrap();
        assert!(rel_err(ab, translated) < 1e-12);
    }

    #[test]
    fn kink_energy_properties() {
        let geom = Geometry::default();
        let params = EnergyParams::default();
        let a = QcaCell::normal(0.0, 0.0, 0);
        let b = QcaCell::normal(20.0, 0.0, 0);
        let k = kink_energy(&a, &b, &geom, &params).unwrap();
        assert!(k > 0.0, "side-by-side kink must be positive, got {k}");
        let k_rev = kink_energy(&b, &a, &geom, &params).unwrap();
        assert!(rel_err(k, k_rev) < 1e-12);

        // Doubling every distance (including the dot spacing) halves the energy.
        let geom2 = Geometry {
            cell_size: 36.0,
            dot_diameter: 10.0,
            dot_spacing: 18.0,
            pitch: 40.0,
        };
        let b2 = QcaCell::normal(40.0, 0.0, 0);
        let k2 = kink_energy(&a, &b2, &geom2, &params).unwrap();
        assert!(rel_err(k2, k / 2.0) < 1e-12);

        assert_eq!(
            kink_energy(&a, &a, &geom, &params).unwrap_err(),
            EnergyError::CoincidentCells
        );
    }

    #[test]
    fn coupling_is_symmetric_across_both_diagonals() {
        let geom = Geometry::default();
        let params = EnergyParams::default();
        let a = QcaCell::normal(0.0, 0.0, 0);
        let ne = QcaCell::normal(20.0, 20.0, 0);
        let se = QcaCell::normal(20.0, -20.0, 0);

        // The raw kink differs between the two diagonals...
        let k_ne = kink_energy(&a, &ne, &geom, &params).unwrap();
        let k_se = kink_energy(&a, &se, &geom, &params).unwrap();
        assert!(rel_err(k_ne, k_se) > 0.1);

        // ...while the averaged coupling is identical and anti-aligning.
        let c_ne = cell_coupling(&a, &ne, &geom, &params).unwrap();
        let c_se = cell_coupling(&a, &se, &geom, &params).unwrap();
        assert!(rel_err(c_ne, c_se) < 1e-12);
        assert!(c_ne < 0.0);

        // Side-by-side the coupling equals the kink energy.
        let b = QcaCell::normal(20.0, 0.0, 0);
        let k_side = kink_energy(&a, &b, &geom, &params).unwrap();
        let c_side = cell_coupling(&a, &b, &geom, &params).unwrap();
        assert!(rel_err(k_side, c_side) < 1e-12);
    }

    #[test]
    fn one_over_r_homogeneity() {
        let params = EnergyParams::default();
        let geom = Geometry::default();
        let a = QcaCell::normal(0.0, 0.0, 0);
        let b = QcaCell::normal(20.0, 20.0, 0);
        let base = kink_energy(&a, &b, &geom, &params).unwrap();
        for s in [2.0, 5.0, 10.0] {
            let geom_s = Geometry {
                cell_size: geom.cell_size * s,
                dot_diameter: geom.dot_diameter * s,
                dot_spacing: geom.dot_spacing * s,
                pitch: geom.pitch * s,
            };
            let b_s = QcaCell::normal(20.0 * s, 20.0 * s, 0);
            let scaled = kink_energy(&a, &b_s, &geom_s, &params).unwrap();
            assert!(rel_err(scaled, base / s) < 1e-12, "scale {s}");
        }
    }

    #[test]
    fn neighborhood_energy_is_the_driver_sum() {
        let geom = Geometry::default();
        let params = EnergyParams::default();
        let target = QcaCell::normal(0.0, 0.0, 0);
        let drivers: Vec<CellChargeConfig> = [(20.0, 0.0), (0.0, 20.0), (0.0, -20.0)]
            .iter()
            .map(|&(x, y)| {
                CellChargeConfig::new(&QcaCell::normal(x, y, 0), 1, &geom).unwrap()
            })
            .collect();
        let total = neighborhood_energy(&target, 1, &drivers, &geom, &params).unwrap();
        let manual: f64 = drivers
            .iter()
            .map(|d| {
                oracle_cells_interaction(
                    (0.0, 0.0),
                    1,
                    (d.cell.x, d.cell.y),
                    1,
                    geom.dot_spacing,
                    1.0,
                )
            })
            .sum();
        assert!(rel_err(total, manual) < 1e-12);

        assert_eq!(
            neighborhood_energy(&target, 1, &[], &geom, &params).unwrap_err(),
            EnergyError::EmptyNeighborhood
        );
    }

    #[test]
    fn all_energies_are_finite_and_positive() {
        let params = EnergyParams::default();
        let out = reference_output_stage_energies(&params).unwrap();
        assert!(out.e_opp.is_finite() && out.e_opp > 0.0);
        assert!(out.e_same.is_finite() && out.e_same > 0.0);
        assert!(out.e_kink.is_finite() && out.e_kink > 0.0);
        assert_eq!(out.e_kink, out.e_opp - out.e_same);
    }

    #[test]
    fn reference_output_stage_tracks_published_values() {
        // The closest documented reconstruction: within 2% of the published
        // 29.211e-20 / 19.497e-20 J pair, and the kink identity is exact.
        let out = reference_output_stage_energies(&EnergyParams::default()).unwrap();
        assert!(rel_err(out.e_opp, 29.211e-20) < 0.02, "E_opp {:.4e}", out.e_opp);
        assert!(rel_err(out.e_same, 19.497e-20) < 0.01, "E_same {:.4e}", out.e_same);
    }

    #[test]
    fn output_stage_kink_on_a_wire_layout() {
        let geom = Geometry::default();
        let params = EnergyParams::default();
        let mut cells =
            crate::layout::place_wire((0.0, 0.0), (60.0, 0.0), &[(4, 0)], &geom).unwrap();
        cells[0].role = crate::layout::CellRole::Input("A".into());
        cells[3].role = crate::layout::CellRole::Output("f".into());
        let layout = QcaLayout::new("wire", geom, cells);
        let got = output_stage_kink(&layout, "f", DEFAULT_RADIUS, &params).unwrap();

        // Neighbors within 65 nm of the output at x=60: cells at 0, 20, 40.
        let manual: f64 = [(0.0, 0.0), (20.0, 0.0), (40.0, 0.0)]
            .iter()
            .map(|&(x, y)| {
                oracle_cells_interaction((60.0, 0.0), -1, (x, y), 1, geom.dot_spacing, 1.0)
                    - oracle_cells_interaction((60.0, 0.0), 1, (x, y), 1, geom.dot_spacing, 1.0)
            })
            .sum();
        assert!(rel_err(got.e_kink, manual) < 1e-12);

        assert_eq!(
            output_stage_kink(&layout, "g", DEFAULT_RADIUS, &params).unwrap_err(),
            EnergyError::MissingOutput("g".into())
        );
    }

    #[test]
    fn single_driver_output_stage_equals_pair_kink() {
        let geom = Geometry::default();
        let params = EnergyParams::default();
        let mut cells = crate::layout::place_wire((0.0, 0.0), (20.0, 0.0), &[(2, 0)], &geom)
            .unwrap();
        cells[0].role = crate::layout::CellRole::Input("A".into());
        cells[1].role = crate::layout::CellRole::Output("f".into());
        let layout = QcaLayout::new("pair", geom, cells);
        let got = output_stage_kink(&layout, "f", DEFAULT_RADIUS, &params).unwrap();
        let pair = kink_energy(
            &QcaCell::normal(20.0, 0.0, 0),
            &QcaCell::normal(0.0, 0.0, 0),
            &geom,
            &params,
        )
        .unwrap();
        assert!(rel_err(got.e_kink, pair) < 1e-12);
    }

    const DEFAULT_RADIUS: f64 = crate::layout::DEFAULT_RADIUS_OF_EFFECT;
}

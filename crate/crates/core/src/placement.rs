//! Donor-placement enumeration under +-a0 uncertainty, symmetry reduction to
//! the 15 distinct displacement classes, and a parameterized valley-
//! interference exchange model for strained and unstrained silicon.
//!
//! The model is a Herring-Flicker-style envelope (d/a_B)^{5/2} e^{-2d/a_B}
//! multiplied by a valley-interference factor: six-valley in unstrained
//! silicon, trivially 1 for in-plane displacements in the strained case
//! (valley axis perpendicular to the donor plane).

use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Silicon lattice constant in nm.
pub const LATTICE_CONSTANT_NM: f64 = 0.543;

/// Smallest donor separation the envelope model is trusted at.
pub const VALIDITY_FLOOR_NM: f64 = 5.0;

/// One donor's in-plane position on the 3x3 placement grid, in units of a0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlacementOffset {
    pub dx: i8,
    pub dy: i8,
}

impl PlacementOffset {
    pub fn all_nine() -> impl Iterator<Item = PlacementOffset> {
        (-1i8..=1).flat_map(|dx| (-1i8..=1).map(move |dy| PlacementOffset { dx, dy }))
    }
}

/// A symmetry class of relative displacements: the canonical representative
/// after folding dy -> -dy, and how many of the 81 raw pairs land in it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisplacementClass {
    pub rel_dx: i8,
    pub rel_dy: i8,
    pub multiplicity: u32,
}

/// Strain mode of the substrate. Strain enters only through mode selection,
/// not as a continuous parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StrainMode {
    Strained,
    Unstrained,
}

/// In-plane crystal direction of the inter-donor axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    #[serde(rename = "[100]")]
    Axis100,
    #[serde(rename = "[110]")]
    Axis110,
}

/// Parameters of the valley-interference exchange model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExchangeModelParams {
    pub mode: StrainMode,
    pub prefactor_mhz: f64,
    pub bohr_radius_nm: f64,
    /// Valley wavevector as a fraction of 2 pi / a0.
    pub valley_k0: f64,
    pub axis: Axis,
}

impl ExchangeModelParams {
    pub fn validate(&self) -> Result<()> {
        if self.prefactor_mhz <= 0.0 {
            return Err(Error::InvalidModelParams("prefactor_mhz must be positive".into()));
        }
        if self.bohr_radius_nm <= 0.0 {
            return Err(Error::InvalidModelParams("bohr_radius_nm must be positive".into()));
        }
        if self.valley_k0 <= 0.0 || self.valley_k0 >= 1.0 {
            return Err(Error::InvalidModelParams("valley_k0 must lie in (0, 1)".into()));
        }
        Ok(())
    }

    /// Default strained-silicon calibration (see [`calibrate`]).
    pub fn strained(axis: Axis) -> Self {
        Self {
            mode: StrainMode::Strained,
            prefactor_mhz: 1000.0,
            bohr_radius_nm: 4.0,
            valley_k0: 0.85,
            axis,
        }
    }

    /// Default unstrained-silicon calibration (see [`calibrate`]).
    pub fn unstrained(axis: Axis) -> Self {
        Self {
            mode: StrainMode::Unstrained,
            prefactor_mhz: 33_000.0,
            bohr_radius_nm: 1.8,
            valley_k0: 0.85,
            axis,
        }
    }
}

/// The 15 symmetry-distinct (J, multiplicity) values for a donor pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExchangeDistribution {
    pub separation_nm: f64,
    pub entries: Vec<DistributionEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistributionEntry {
    pub class: DisplacementClass,
    pub j_mhz: f64,
}

impl ExchangeDistribution {
    pub fn spread(&self) -> f64 {
        let max = self.entries.iter().map(|e| e.j_mhz).fold(f64::MIN, f64::max);
        let min = self.entries.iter().map(|e| e.j_mhz).fold(f64::MAX, f64::min);
        max / min
    }

    pub fn j_values(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.j_mhz).collect()
    }
}

/// Cartesian product of the nine placement offsets with themselves, in
/// lexicographic order; 81 pairs.
pub fn enumerate_pair_offsets() -> Vec<(PlacementOffset, PlacementOffset)> {
    PlacementOffset::all_nine()
        .flat_map(|a| PlacementOffset::all_nine().map(move |b| (a, b)))
        .collect()
}

/// Folds the 81 relative displacements by the dy -> -dy mirror across the
/// inter-donor axis into the 15 distinct classes, sorted by (rel_dx, rel_dy).
pub fn symmetry_classes(
    pairs: &[(PlacementOffset, PlacementOffset)],
) -> Result<Vec<DisplacementClass>> {
    if pairs.len() != 81 {
        return Err(Error::MalformedInput(format!(
            "expected the 81-pair enumeration, got {} pairs",
            pairs.len()
        )));
    }
    let mut counts = std::collections::BTreeMap::new();
    for (a, b) in pairs {
        let rel_dx = b.dx - a.dx;
        let rel_dy = (b.dy - a.dy).abs();
        *counts.entry((rel_dx, rel_dy)).or_insert(0u32) += 1;
    }
    Ok(counts
        .into_iter()
        .map(|((rel_dx, rel_dy), multiplicity)| DisplacementClass { rel_dx, rel_dy, multiplicity })
        .collect())
}

/// Valley-interference factor for an in-plane displacement given in crystal
/// coordinates (nm). Unstrained: all six valleys; strained: the two valleys
/// along the out-of-plane axis, which give exactly 1 for in-plane vectors.
fn valley_factor(model: &ExchangeModelParams, crystal_nm: [f64; 2]) -> f64 {
    match model.mode {
        StrainMode::Strained => 1.0,
        StrainMode::Unstrained => {
            let k = model.valley_k0 * TAU / LATTICE_CONSTANT_NM;
            // +-x, +-y contribute 2cos(k d_i) each; +-z see no in-plane phase.
            let sum = 2.0 * (k * crystal_nm[0]).cos() + 2.0 * (k * crystal_nm[1]).cos() + 2.0;
            sum * sum / 36.0
        }
    }
}

/// Rotates a displacement given in the axis-aligned frame (x along the
/// inter-donor axis) into crystal coordinates.
fn to_crystal(axis: Axis, axis_frame_nm: [f64; 2]) -> [f64; 2] {
    match axis {
        Axis::Axis100 => axis_frame_nm,
        Axis::Axis110 => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            [
                s * (axis_frame_nm[0] - axis_frame_nm[1]),
                s * (axis_frame_nm[0] + axis_frame_nm[1]),
            ]
        }
    }
}

/// Exchange strength for a displacement expressed in the axis-aligned frame
/// (nm): envelope prefactor (d/a_B)^{5/2} e^{-2d/a_B} times the valley factor.
pub fn exchange_value(displacement_nm: [f64; 2], model: &ExchangeModelParams) -> Result<f64> {
    model.validate()?;
    let d = (displacement_nm[0].powi(2) + displacement_nm[1].powi(2)).sqrt();
    if d < VALIDITY_FLOOR_NM {
        return Err(Error::BelowValidityFloor(d));
    }
    let x = d / model.bohr_radius_nm;
    let envelope = model.prefactor_mhz * x.powf(2.5) * (-2.0 * x).exp();
    let v = valley_factor(model, to_crystal(model.axis, displacement_nm));
    Ok(envelope * v)
}

/// Applies [`exchange_value`] to the 15 class-representative displacements:
/// the base separation along the chosen axis plus the class offset in a0.
pub fn exchange_distribution(
    separation_nm: f64,
    model: &ExchangeModelParams,
) -> Result<ExchangeDistribution> {
    let classes = symmetry_classes(&enumerate_pair_offsets())?;
    let mut entries = Vec::with_capacity(classes.len());
    for class in classes {
        let displacement = [
            separation_nm + class.rel_dx as f64 * LATTICE_CONSTANT_NM,
            class.rel_dy as f64 * LATTICE_CONSTANT_NM,
        ];
        let j_mhz = exchange_value(displacement, model)?;
        entries.push(DistributionEntry { class, j_mhz });
    }
    Ok(ExchangeDistribution { separation_nm, entries })
}

/// Constraint set for [`calibrate`].
#[derive(Debug, Clone, Copy)]
pub struct CalibrationConstraints {
    /// Strained separation whose J must match the unstrained envelope at
    /// `unstrained_equivalent_nm` within a factor of two.
    pub strained_reference_nm: f64,
    pub unstrained_equivalent_nm: f64,
    /// Largest separation at which the bare exchange time 1/(4J) must stay
    /// at or below 1 us, i.e. J >= 0.25 MHz.
    pub max_separation_nm: f64,
    pub min_j_at_max_separation_mhz: f64,
}

impl Default for CalibrationConstraints {
    fn default() -> Self {
        Self {
            strained_reference_nm: 20.0,
            unstrained_equivalent_nm: 13.0,
            max_separation_nm: 25.0,
            min_j_at_max_separation_mhz: 0.25,
        }
    }
}

/// Calibrated strained and unstrained model parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibratedModels {
    pub strained: ExchangeModelParams,
    pub unstrained: ExchangeModelParams,
}

/// Envelope-only evaluation (valley factor forced to 1), used to compare a
/// strained J against the unstrained envelope without valley scatter.
pub fn envelope_value(separation_nm: f64, model: &ExchangeModelParams) -> Result<f64> {
    model.validate()?;
    if separation_nm < VALIDITY_FLOOR_NM {
        return Err(Error::BelowValidityFloor(separation_nm));
    }
    let x = separation_nm / model.bohr_radius_nm;
    Ok(model.prefactor_mhz * x.powf(2.5) * (-2.0 * x).exp())
}

/// Solves the model prefactors against the constraint set, keeping the Bohr
/// radii of the default family. Fails if the constraints cannot be met.
pub fn calibrate(axis: Axis, constraints: &CalibrationConstraints) -> Result<CalibratedModels> {
    let mut strained = ExchangeModelParams::strained(axis);
    let mut unstrained = ExchangeModelParams::unstrained(axis);

    // Fix the strained prefactor from the far-separation timing floor with
    // a margin, then match the unstrained envelope at the equivalence point.
    let bare = envelope_value(constraints.max_separation_nm, &strained)? / strained.prefactor_mhz;
    if bare <= 0.0 {
        return Err(Error::InfeasibleCalibration("strained envelope vanished".into()));
    }
    strained.prefactor_mhz = 1.4 * constraints.min_j_at_max_separation_mhz / bare;

    let j_ref = envelope_value(constraints.strained_reference_nm, &strained)?;
    let bare_u = envelope_value(constraints.unstrained_equivalent_nm, &unstrained)?
        / unstrained.prefactor_mhz;
    if bare_u <= 0.0 {
        return Err(Error::InfeasibleCalibration("unstrained envelope vanished".into()));
    }
    unstrained.prefactor_mhz = j_ref / bare_u;

    // Verify the constraint set on the result.
    let ratio = envelope_value(constraints.strained_reference_nm, &strained)?
        / envelope_value(constraints.unstrained_equivalent_nm, &unstrained)?;
    if !(0.5..=2.0).contains(&ratio) {
        return Err(Error::InfeasibleCalibration(format!(
            "equivalence ratio {ratio} outside [0.5, 2]"
        )));
    }
    if envelope_value(constraints.max_separation_nm, &strained)?
        < constraints.min_j_at_max_separation_mhz
    {
        return Err(Error::InfeasibleCalibration("timing floor unmet".into()));
    }
    Ok(CalibratedModels { strained, unstrained })
}

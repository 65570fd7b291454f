//! Transition analysis of the reduced electron Hamiltonian: eigenstate
//! enumeration, drive matrix elements, allowed/forbidden classification, and
//! frequency-band overlap between donor triples.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::transverse_sums;
use crate::linalg::{hermitian_eigensystem, HermitianOperator};

/// One eigenstate pair with its transition frequency (positive convention)
/// and the transverse-drive matrix-element magnitude per unit amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub state_a: usize,
    pub state_b: usize,
    pub frequency_mhz: f64,
    pub element: f64,
    pub allowed: bool,
}

/// All eigenstate pairs of a drift Hamiltonian, sorted by frequency.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionTable {
    pub transitions: Vec<Transition>,
}

impl TransitionTable {
    pub fn allowed(&self) -> impl Iterator<Item = &Transition> {
        self.transitions.iter().filter(|t| t.allowed)
    }

    pub fn max_element(&self) -> f64 {
        self.transitions.iter().map(|t| t.element).fold(0.0, f64::max)
    }
}

/// Default relative element threshold separating symmetry-forbidden lines
/// from weakly allowed ones.
pub const DEFAULT_ELEMENT_THRESHOLD: f64 = 1e-3;

/// Default frequency-merge tolerance in MHz, a proxy for line selectivity.
pub const DEFAULT_MERGE_TOLERANCE_MHZ: f64 = 1.0;

/// Diagonalizes the drift and tabulates, for every eigenpair (a, b), the
/// quadrature combination of the X-sum and Y-sum drive elements. A transition
/// is allowed when its element reaches `element_threshold` times the largest
/// element in the table.
pub fn transition_table(
    drift: &HermitianOperator,
    element_threshold: f64,
) -> Result<TransitionTable> {
    if element_threshold <= 0.0 {
        return Err(Error::MalformedInput("element_threshold must be positive".into()));
    }
    let eig = hermitian_eigensystem(drift);
    let dim = drift.dim();
    let v = eig.vectors.matrix();
    let (x_sum, y_sum) = transverse_sums_for(dim)?;
    let x_eig = v.adjoint() * &x_sum * v;
    let y_eig = v.adjoint() * &y_sum * v;

    let mut transitions = Vec::with_capacity(dim * (dim - 1) / 2);
    for a in 0..dim {
        for b in (a + 1)..dim {
            let element = (x_eig[(a, b)].norm_sqr() + y_eig[(a, b)].norm_sqr()).sqrt();
            transitions.push(Transition {
                state_a: a,
                state_b: b,
                frequency_mhz: eig.values[b] - eig.values[a],
                element,
                allowed: false,
            });
        }
    }
    let max_element = transitions.iter().map(|t| t.element).fold(0.0, f64::max);
    for t in &mut transitions {
        t.allowed = t.element >= element_threshold * max_element;
    }
    transitions.sort_by(|x, y| x.frequency_mhz.partial_cmp(&y.frequency_mhz).unwrap());
    Ok(TransitionTable { transitions })
}

fn transverse_sums_for(dim: usize) -> Result<(crate::linalg::CMat, crate::linalg::CMat)> {
    if dim != 8 {
        return Err(Error::DimensionMismatch { left: dim, right: 8 });
    }
    Ok(transverse_sums())
}

/// Allowed transitions' frequencies with values closer than `merge_tolerance`
/// merged to their mean; sorted ascending.
pub fn allowed_frequencies(table: &TransitionTable, merge_tolerance_mhz: f64) -> Vec<f64> {
    let mut freqs: Vec<f64> = table.allowed().map(|t| t.frequency_mhz).collect();
    freqs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    merge_close(&freqs, merge_tolerance_mhz)
}

fn merge_close(sorted: &[f64], tolerance: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut cluster: Vec<f64> = Vec::new();
    for &f in sorted {
        if let Some(&last) = cluster.last() {
            if f - last < tolerance {
                cluster.push(f);
                continue;
            }
            out.push(cluster.iter().sum::<f64>() / cluster.len() as f64);
            cluster.clear();
        }
        cluster.push(f);
    }
    if !cluster.is_empty() {
        out.push(cluster.iter().sum::<f64>() / cluster.len() as f64);
    }
    out
}

/// True iff some frequency pair across the two sorted lists differs by less
/// than `tolerance`.
pub fn band_overlap(freqs_a: &[f64], freqs_b: &[f64], tolerance_mhz: f64) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < freqs_a.len() && j < freqs_b.len() {
        let diff = freqs_a[i] - freqs_b[j];
        if diff.abs() < tolerance_mhz {
            return true;
        }
        if diff < 0.0 {
            i += 1;
        } else {
            j += 1;
        }
    }
    false
}

/// Signed carrier frequencies for the circularly polarized drive: +f when the
/// raising part of the drive connects the pair upward in energy, -f when the
/// lowering part does. Used to seed the GRAPE carrier set.
pub fn signed_carriers(
    drift: &HermitianOperator,
    element_threshold: f64,
    merge_tolerance_mhz: f64,
) -> Result<Vec<f64>> {
    let eig = hermitian_eigensystem(drift);
    let v = eig.vectors.matrix();
    let (x_sum, y_sum) = transverse_sums_for(drift.dim())?;
    // S+ = (X + iY)/2 summed over spins, in the eigenbasis.
    let raise = (&x_sum + &y_sum * num_complex::Complex64::new(0.0, 1.0))
        * num_complex::Complex64::new(0.5, 0.0);
    let raise_eig = v.adjoint() * raise * v;

    let dim = drift.dim();
    let mut elems: Vec<(f64, f64)> = Vec::new(); // (signed freq, element)
    for a in 0..dim {
        for b in (a + 1)..dim {
            let freq = eig.values[b] - eig.values[a];
            let up = raise_eig[(b, a)].norm(); // drive a -> b at +freq
            let down = raise_eig[(a, b)].norm(); // drive b -> a at -freq
            if up > 0.0 {
                elems.push((freq, up));
            }
            if down > 0.0 {
                elems.push((-freq, down));
            }
        }
    }
    let max = elems.iter().map(|&(_, e)| e).fold(0.0, f64::max);
    let mut freqs: Vec<f64> = elems
        .into_iter()
        .filter(|&(_, e)| e >= element_threshold * max)
        .map(|(f, _)| f)
        .collect();
    freqs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(merge_close(&freqs, merge_tolerance_mhz))
}

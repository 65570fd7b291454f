//! Electron-nuclear Hamiltonian of the triple-donor device, the
//! frozen-nuclear reduced electron Hamiltonian, the rotating-frame drift, and
//! the transverse AC control generators.
//!
//! Register order is (T, c, C, nT, nc, nC): target, coupler and control
//! electrons first, then the matching nuclei. Site 0 is the most significant
//! tensor factor. Basis index 0 of every spin is the down state, with
//! Z |down> = +|down>.

use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::linalg::{embed_pauli, exchange_coupling, CMat, HermitianOperator, PauliAxis};

/// Electron site indices within the 8-dim electron register.
pub const SITE_TARGET: usize = 0;
pub const SITE_COUPLER: usize = 1;
pub const SITE_CONTROL: usize = 2;

/// Device constants of the triple-donor system. All couplings are in the
/// Pauli sigma.sigma convention and in MHz; the magnetic field in tesla.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviceParams {
    pub b_field_tesla: f64,
    pub gamma_e_mhz_per_t: f64,
    pub gamma_n_mhz_per_t: f64,
    pub a_t_mhz: f64,
    pub a_c_coupler_mhz: f64,
    pub a_c_control_mhz: f64,
    pub j_tc_mhz: f64,
    pub j_cc_mhz: f64,
}

impl Default for DeviceParams {
    /// Literature-standard Si:P values; exchange defaults to a representative
    /// strained-silicon pair and is usually overridden per run.
    fn default() -> Self {
        Self {
            b_field_tesla: 1.0,
            gamma_e_mhz_per_t: 27_970.0,
            gamma_n_mhz_per_t: 17.23,
            a_t_mhz: 29.4,
            a_c_coupler_mhz: 29.4,
            a_c_control_mhz: 29.4,
            j_tc_mhz: 20.0,
            j_cc_mhz: 5.0,
        }
    }
}

impl DeviceParams {
    pub fn validate(&self) -> Result<()> {
        if self.b_field_tesla <= 0.0 {
            return Err(Error::InvalidDeviceParams("b_field_tesla must be positive".into()));
        }
        if self.gamma_e_mhz_per_t <= 0.0 {
            return Err(Error::InvalidDeviceParams("gamma_e_mhz_per_t must be positive".into()));
        }
        if self.a_t_mhz <= 0.0 || self.a_c_coupler_mhz <= 0.0 || self.a_c_control_mhz <= 0.0 {
            return Err(Error::InvalidDeviceParams("hyperfine constants must be positive".into()));
        }
        if self.j_tc_mhz < 0.0 || self.j_cc_mhz < 0.0 {
            return Err(Error::InvalidDeviceParams("exchange strengths must be non-negative".into()));
        }
        let zeeman = self.gamma_e_mhz_per_t * self.b_field_tesla;
        let coupling_max = [
            self.a_t_mhz,
            self.a_c_coupler_mhz,
            self.a_c_control_mhz,
            self.j_tc_mhz,
            self.j_cc_mhz,
        ]
        .into_iter()
        .fold(0.0, f64::max);
        if zeeman <= 100.0 * coupling_max {
            return Err(Error::InvalidDeviceParams(format!(
                "strong-field regime violated: gamma_e*B = {zeeman} MHz must exceed 100x the largest coupling {coupling_max} MHz"
            )));
        }
        Ok(())
    }

    pub fn electron_zeeman_mhz(&self) -> f64 {
        self.gamma_e_mhz_per_t * self.b_field_tesla
    }

    pub fn with_exchange(mut self, j_tc_mhz: f64, j_cc_mhz: f64) -> Self {
        self.j_tc_mhz = j_tc_mhz;
        self.j_cc_mhz = j_cc_mhz;
        self
    }
}

/// Orientation of a frozen nuclear spin. `Down` maps to basis index 0 and to
/// Z eigenvalue +1 in our sign convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Spin {
    Down,
    Up,
}

impl Spin {
    pub fn z_sign(self) -> f64 {
        match self {
            Spin::Down => 1.0,
            Spin::Up => -1.0,
        }
    }

    pub fn basis_index(self) -> usize {
        match self {
            Spin::Down => 0,
            Spin::Up => 1,
        }
    }
}

/// Frozen orientations of the three nuclear spins, ordered (nT, nc, nC).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NuclearConfig {
    pub spins: [Spin; 3],
}

impl NuclearConfig {
    pub fn all_down() -> Self {
        Self { spins: [Spin::Down; 3] }
    }

    pub fn new(n_t: Spin, n_c: Spin, n_cc: Spin) -> Self {
        Self { spins: [n_t, n_c, n_cc] }
    }

    /// The nuclear sector left behind by the protocol's electron-nuclear
    /// swap-in: the target and coupler nuclei end up down, the control
    /// nucleus up. This is the sector whose reduced drift carries the
    /// (+A_T, +A_c, -A_C) sign pattern; with equal hyperfine couplings the
    /// all-down sector is invariant under global spin rotations and a
    /// uniform transverse drive cannot address individual donors there, so
    /// pulse synthesis always targets this sector.
    pub fn post_swap() -> Self {
        Self { spins: [Spin::Down, Spin::Down, Spin::Up] }
    }
}

/// A control carrier: frequency stored as the offset from the rotating-frame
/// reference gamma_e * B, and the hardware amplitude limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlCarrier {
    pub frequency_mhz: f64,
    pub max_amplitude_mhz: f64,
}

impl ControlCarrier {
    pub fn new(frequency_mhz: f64, max_amplitude_mhz: f64) -> Result<Self> {
        if max_amplitude_mhz <= 0.0 {
            return Err(Error::InvalidDeviceParams("max_amplitude_mhz must be positive".into()));
        }
        Ok(Self { frequency_mhz, max_amplitude_mhz })
    }

    /// Control generator for this carrier, enforcing the amplitude limit.
    pub fn generator(
        &self,
        amplitude_mhz: f64,
        phase_rad: f64,
        time_us: f64,
    ) -> Result<HermitianOperator> {
        if amplitude_mhz.abs() > self.max_amplitude_mhz {
            return Err(Error::AmplitudeExceeded {
                amplitude: amplitude_mhz,
                max_amplitude: self.max_amplitude_mhz,
            });
        }
        Ok(control_generator(amplitude_mhz, phase_rad, self.frequency_mhz, time_us))
    }
}

fn electron_z_sum(n_sites: usize) -> CMat {
    let mut acc = CMat::zeros(1 << n_sites, 1 << n_sites);
    for site in [SITE_TARGET, SITE_COUPLER, SITE_CONTROL] {
        acc += embed_pauli(PauliAxis::Z, site, n_sites).unwrap().matrix();
    }
    acc
}

/// Full 64-dim electron-nuclear Hamiltonian: Zeeman terms for all six spins,
/// three hyperfine sigma.sigma couplings, and the two exchange couplings.
pub fn build_full(params: &DeviceParams) -> Result<HermitianOperator> {
    params.validate()?;
    let n = 6;
    let gamma_e_b = params.gamma_e_mhz_per_t * params.b_field_tesla;
    let gamma_n_b = params.gamma_n_mhz_per_t * params.b_field_tesla;

    let mut h = electron_z_sum(n) * num_complex::Complex64::new(gamma_e_b, 0.0);
    for nucleus in 3..6 {
        h += embed_pauli(PauliAxis::Z, nucleus, n)?.matrix() * num_complex::Complex64::new(gamma_n_b, 0.0);
    }
    for (electron, nucleus, a) in [
        (SITE_TARGET, 3, params.a_t_mhz),
        (SITE_COUPLER, 4, params.a_c_coupler_mhz),
        (SITE_CONTROL, 5, params.a_c_control_mhz),
    ] {
        h += exchange_coupling(electron, nucleus, n)?.matrix() * num_complex::Complex64::new(a, 0.0);
    }
    h += exchange_coupling(SITE_TARGET, SITE_COUPLER, n)?.matrix()
        * num_complex::Complex64::new(params.j_tc_mhz, 0.0);
    h += exchange_coupling(SITE_COUPLER, SITE_CONTROL, n)?.matrix()
        * num_complex::Complex64::new(params.j_cc_mhz, 0.0);
    Ok(HermitianOperator::new_unchecked(h))
}

/// Effective 8-dim electron Hamiltonian under the secular (frozen-nuclear)
/// approximation: each sigma_e.sigma_n is replaced by (+-1) Z_e according to
/// the frozen nuclear orientation, dropping the flip-flop terms.
pub fn reduce_to_electron(params: &DeviceParams, nuc: &NuclearConfig) -> Result<HermitianOperator> {
    params.validate()?;
    let n = 3;
    let gamma_e_b = params.electron_zeeman_mhz();
    let hyperfine = [params.a_t_mhz, params.a_c_coupler_mhz, params.a_c_control_mhz];
    let sites = [SITE_TARGET, SITE_COUPLER, SITE_CONTROL];

    let mut h = CMat::zeros(8, 8);
    for k in 0..3 {
        let coeff = gamma_e_b + nuc.spins[k].z_sign() * hyperfine[k];
        h += embed_pauli(PauliAxis::Z, sites[k], n)?.matrix()
            * num_complex::Complex64::new(coeff, 0.0);
    }
    h += exchange_coupling(SITE_TARGET, SITE_COUPLER, n)?.matrix()
        * num_complex::Complex64::new(params.j_tc_mhz, 0.0);
    h += exchange_coupling(SITE_COUPLER, SITE_CONTROL, n)?.matrix()
        * num_complex::Complex64::new(params.j_cc_mhz, 0.0);
    Ok(HermitianOperator::new_unchecked(h))
}

/// Drift in the frame rotating at gamma_e * B on all three electrons:
/// H_e - gamma_e B (Z_T + Z_C + Z_c). Exact, since the uniform Z rotation
/// commutes with every sigma.sigma term.
pub fn rotating_frame_drift(
    params: &DeviceParams,
    h_electron: &HermitianOperator,
) -> Result<HermitianOperator> {
    if h_electron.dim() != 8 {
        return Err(Error::DimensionMismatch { left: h_electron.dim(), right: 8 });
    }
    let gamma_e_b = params.electron_zeeman_mhz();
    let shift = electron_z_sum(3) * num_complex::Complex64::new(gamma_e_b, 0.0);
    Ok(HermitianOperator::new_unchecked(h_electron.matrix() - shift))
}

/// Convenience: reduced electron Hamiltonian already in the rotating frame.
pub fn drift_for(params: &DeviceParams, nuc: &NuclearConfig) -> Result<HermitianOperator> {
    let h_e = reduce_to_electron(params, nuc)?;
    rotating_frame_drift(params, &h_e)
}

/// Rotating-frame image of the transverse AC drive at a single carrier:
/// amplitude * [cos(2 pi f t + phase)(X_T+X_c+X_C) + sin(...)(Y_T+Y_c+Y_C)],
/// with f the carrier offset from gamma_e * B.
pub fn control_generator(
    amplitude_mhz: f64,
    phase_rad: f64,
    detuning_mhz: f64,
    time_us: f64,
) -> HermitianOperator {
    let theta = TAU * detuning_mhz * time_us + phase_rad;
    let (x_sum, y_sum) = transverse_sums();
    let m = x_sum * num_complex::Complex64::new(amplitude_mhz * theta.cos(), 0.0)
        + y_sum * num_complex::Complex64::new(amplitude_mhz * theta.sin(), 0.0);
    HermitianOperator::new_unchecked(m)
}

/// (X_T + X_c + X_C, Y_T + Y_c + Y_C) on the 8-dim electron register.
pub fn transverse_sums() -> (CMat, CMat) {
    let mut x = CMat::zeros(8, 8);
    let mut y = CMat::zeros(8, 8);
    for site in [SITE_TARGET, SITE_COUPLER, SITE_CONTROL] {
        x += embed_pauli(PauliAxis::X, site, 3).unwrap().matrix();
        y += embed_pauli(PauliAxis::Y, site, 3).unwrap().matrix();
    }
    (x, y)
}

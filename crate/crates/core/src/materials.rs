//! Glass and viscoelastic interlayer materials.
//!
//! The interlayer is a generalized Maxwell chain: a long-term spring in
//! parallel with `P` spring-dashpot units. Its complex shear modulus is split
//! into the instantaneous (real, frequency independent) part and a frequency
//! dependent part,
//!
//! ```text
//! G*(ω)    = G_{2,0} + G*_fr(ω)
//! G*_fr(ω) = -Σ G_p / (1 + iωθ_p)
//! ```
//!
//! which is the analytic continuation of the storage/loss decomposition to
//! complex `ω`, as required by the complex eigenvalue solvers.
//!
//! All quantities are SI (Pa, s, kg, m); the JSON database uses MPa/GPa and
//! is converted at ingestion.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MPA: f64 = 1.0e6;
const GPA: f64 = 1.0e9;

/// Smallest admissible |1 + iωθ| before an evaluation is treated as a pole.
const POLE_TOLERANCE: f64 = 1.0e-14;

static BUILTIN_JSON: &str = include_str!("../data/materials.json");

/// One spring-dashpot unit of the chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxwellUnit {
    /// Shear modulus [Pa].
    pub shear_modulus: f64,
    /// Relaxation time [s].
    pub relaxation_time: f64,
}

impl MaxwellUnit {
    pub fn new(shear_modulus: f64, relaxation_time: f64) -> Result<Self> {
        if !(shear_modulus > 0.0 && shear_modulus.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "unit shear modulus must be positive, got {shear_modulus}"
            )));
        }
        if !(relaxation_time > 0.0 && relaxation_time.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "relaxation time must be positive, got {relaxation_time}"
            )));
        }
        Ok(Self {
            shear_modulus,
            relaxation_time,
        })
    }
}

/// Complex shear modulus [Pa].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexModulus(pub Complex64);

impl ComplexModulus {
    pub fn value(self) -> Complex64 {
        self.0
    }

    pub fn storage(self) -> f64 {
        self.0.re
    }

    pub fn loss(self) -> f64 {
        self.0.im
    }
}

/// Generalized Maxwell chain. `units` empty means a purely elastic material.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxwellChain {
    long_term_modulus: f64,
    units: Vec<MaxwellUnit>,
}

impl MaxwellChain {
    pub fn new(long_term_modulus: f64, units: Vec<MaxwellUnit>) -> Result<Self> {
        if !(long_term_modulus >= 0.0 && long_term_modulus.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "long-term modulus must be non-negative, got {long_term_modulus}"
            )));
        }
        let chain = Self {
            long_term_modulus,
            units,
        };
        if !(chain.instantaneous_modulus() > 0.0) {
            return Err(Error::InvalidParameter(
                "instantaneous modulus of the chain must be positive".into(),
            ));
        }
        Ok(chain)
    }

    /// Purely elastic chain with modulus `g`.
    pub fn elastic(g: f64) -> Result<Self> {
        Self::new(g, Vec::new())
    }

    pub fn long_term_modulus(&self) -> f64 {
        self.long_term_modulus
    }

    pub fn units(&self) -> &[MaxwellUnit] {
        &self.units
    }

    pub fn is_elastic(&self) -> bool {
        self.units.is_empty()
    }

    /// `G_{2,0} = G_∞ + Σ G_p`.
    pub fn instantaneous_modulus(&self) -> f64 {
        self.long_term_modulus + self.units.iter().map(|u| u.shear_modulus).sum::<f64>()
    }

    /// Prony series `G(t) = G_∞ + Σ G_p exp(-t/θ_p)`.
    pub fn relaxation_modulus(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::InvalidParameter(format!("time must be non-negative, got {t}")));
        }
        Ok(self.long_term_modulus
            + self
                .units
                .iter()
                .map(|u| u.shear_modulus * (-t / u.relaxation_time).exp())
                .sum::<f64>())
    }

    /// Frequency dependent part `G*_fr(ω) = -Σ G_p/(1 + iωθ_p)`.
    pub fn frequency_part(&self, omega: Complex64) -> Result<ComplexModulus> {
        let mut acc = Complex64::new(0.0, 0.0);
        for u in &self.units {
            let den = pole_checked(omega, u.relaxation_time)?;
            acc -= u.shear_modulus / den;
        }
        Ok(ComplexModulus(acc))
    }

    /// `G*(ω) = G_{2,0} + G*_fr(ω)`.
    pub fn complex_modulus(&self, omega: Complex64) -> Result<ComplexModulus> {
        let fr = self.frequency_part(omega)?;
        Ok(ComplexModulus(fr.0 + self.instantaneous_modulus()))
    }

    /// `dG*_fr/dω = Σ G_p iθ_p/(1 + iωθ_p)^2`.
    pub fn frequency_part_derivative(&self, omega: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for u in &self.units {
            let den = pole_checked(omega, u.relaxation_time)?;
            acc += Complex64::new(0.0, u.shear_modulus * u.relaxation_time) / (den * den);
        }
        Ok(acc)
    }

    /// Chain with every relaxation time multiplied by `factor`.
    pub fn with_scaled_times(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "time scaling factor must be positive, got {factor}"
            )));
        }
        let units = self
            .units
            .iter()
            .map(|u| MaxwellUnit::new(u.shear_modulus, u.relaxation_time * factor))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.long_term_modulus, units)
    }
}

fn pole_checked(omega: Complex64, theta: f64) -> Result<Complex64> {
    let den = Complex64::new(1.0, 0.0) + Complex64::i() * omega * theta;
    if den.norm() < POLE_TOLERANCE {
        return Err(Error::Singular(format!(
            "ω = {omega} hits the pole of a unit with θ = {theta}"
        )));
    }
    Ok(den)
}

/// Williams-Landel-Ferry shift, `log10 a_T = -C1 (T - T0) / (C2 + T - T0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WlfShift {
    #[serde(rename = "t0_c")]
    pub reference_temperature: f64,
    pub c1: f64,
    pub c2: f64,
}

impl WlfShift {
    pub fn shift_factor(&self, temperature: f64) -> Result<f64> {
        let dt = temperature - self.reference_temperature;
        let den = self.c2 + dt;
        if den == 0.0 || !den.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "WLF shift undefined at T = {temperature} °C (C2 + T - T0 = 0)"
            )));
        }
        Ok(10f64.powf(-self.c1 * dt / den))
    }
}

/// Relaxation times of `chain` shifted to `temperature`.
pub fn shifted_chain(chain: &MaxwellChain, wlf: &WlfShift, temperature: f64) -> Result<MaxwellChain> {
    if temperature == wlf.reference_temperature {
        return Ok(chain.clone());
    }
    chain.with_scaled_times(wlf.shift_factor(temperature)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlassMaterial {
    /// Young's modulus [Pa].
    pub young_modulus: f64,
    pub poisson_ratio: f64,
    /// Density [kg/m³].
    pub density: f64,
}

impl GlassMaterial {
    pub fn new(young_modulus: f64, poisson_ratio: f64, density: f64) -> Result<Self> {
        if !(young_modulus > 0.0) || !(density > 0.0) || !(0.0..0.5).contains(&poisson_ratio) {
            return Err(Error::InvalidParameter(format!(
                "invalid glass: E = {young_modulus}, ν = {poisson_ratio}, ρ = {density}"
            )));
        }
        Ok(Self {
            young_modulus,
            poisson_ratio,
            density,
        })
    }

    pub fn shear_modulus(&self) -> f64 {
        self.young_modulus / (2.0 * (1.0 + self.poisson_ratio))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterlayerMaterial {
    pub name: String,
    /// Density [kg/m³].
    pub density: f64,
    /// Constant Poisson ratio.
    pub poisson_ratio: f64,
    pub chain: MaxwellChain,
    pub wlf: Option<WlfShift>,
    /// Temperature [°C] at which `chain` is tabulated. Equals the WLF
    /// reference temperature when shift data is present.
    pub reference_temperature: f64,
}

impl InterlayerMaterial {
    pub fn new(
        name: impl Into<String>,
        density: f64,
        poisson_ratio: f64,
        chain: MaxwellChain,
        wlf: Option<WlfShift>,
        reference_temperature: f64,
    ) -> Result<Self> {
        let name = name.into();
        if !(density > 0.0) {
            return Err(Error::InvalidParameter(format!("{name}: density must be positive")));
        }
        if !(poisson_ratio > 0.0 && poisson_ratio < 0.5) {
            return Err(Error::InvalidParameter(format!(
                "{name}: Poisson ratio must lie in (0, 0.5), got {poisson_ratio}"
            )));
        }
        let reference_temperature = wlf.map(|w| w.reference_temperature).unwrap_or(reference_temperature);
        Ok(Self {
            name,
            density,
            poisson_ratio,
            chain,
            wlf,
            reference_temperature,
        })
    }

    /// Elastic interlayer, mostly useful for limit checks.
    pub fn elastic(name: impl Into<String>, shear_modulus: f64, poisson_ratio: f64, density: f64) -> Result<Self> {
        Self::new(
            name,
            density,
            poisson_ratio,
            MaxwellChain::elastic(shear_modulus)?,
            None,
            25.0,
        )
    }

    /// Young's modulus paired with shear modulus `g` under constant ν2.
    pub fn young_from_shear(&self, g: f64) -> f64 {
        2.0 * (1.0 + self.poisson_ratio) * g
    }

    /// Chain with relaxation times shifted to `temperature` [°C].
    pub fn chain_at(&self, temperature: f64) -> Result<MaxwellChain> {
        match &self.wlf {
            Some(wlf) => shifted_chain(&self.chain, wlf, temperature),
            None if (temperature - self.reference_temperature).abs() <= 1e-9 => Ok(self.chain.clone()),
            None if self.chain.is_elastic() => Ok(self.chain.clone()),
            None => Err(Error::Config(format!(
                "{} has no WLF data; only {} °C is available, {} °C requested",
                self.name, self.reference_temperature, temperature
            ))),
        }
    }
}

/// A built-in or user supplied material record.
#[derive(Debug, Clone, PartialEq)]
pub enum Material {
    Glass(GlassMaterial),
    Interlayer(InterlayerMaterial),
}

// ---------------------------------------------------------------------------
// JSON database
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_mpa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_ratio: Option<f64>,
    pub theta_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterlayerRecord {
    pub name: String,
    pub density: f64,
    pub poisson: f64,
    pub g_inf_mpa: f64,
    /// Instantaneous modulus; required when any unit is given as a ratio.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g0_mpa: Option<f64>,
    /// Tabulation temperature for records without WLF data.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_ref_c: Option<f64>,
    pub units: Vec<UnitRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wlf: Option<WlfShift>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlassRecord {
    pub name: String,
    pub young_gpa: f64,
    pub poisson: f64,
    pub density: f64,
}

/// Serializable material database (MPa/GPa units, as tabulated).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaterialDatabase {
    pub glass: Vec<GlassRecord>,
    pub interlayers: Vec<InterlayerRecord>,
}

impl GlassRecord {
    pub fn to_material(&self) -> Result<GlassMaterial> {
        GlassMaterial::new(self.young_gpa * GPA, self.poisson, self.density)
    }
}

impl InterlayerRecord {
    pub fn to_material(&self) -> Result<InterlayerMaterial> {
        let units = self
            .units
            .iter()
            .map(|u| {
                let g = match (u.g_mpa, u.g_ratio) {
                    (Some(g), None) => g * MPA,
                    (None, Some(r)) => {
                        let g0 = self
                            .g0_mpa
                            .ok_or_else(|| Error::Config(format!("{}: ratio units need `g0_mpa`", self.name)))?;
                        r * g0 * MPA
                    }
                    _ => {
                        return Err(Error::Config(format!(
                            "{}: each unit needs exactly one of `g_mpa` or `g_ratio`",
                            self.name
                        )))
                    }
                };
                MaxwellUnit::new(g, u.theta_s)
            })
            .collect::<Result<Vec<_>>>()?;
        let chain = MaxwellChain::new(self.g_inf_mpa * MPA, units)?;
        let t_ref = match (&self.wlf, self.t_ref_c) {
            (Some(w), _) => w.reference_temperature,
            (None, Some(t)) => t,
            (None, None) => 25.0,
        };
        InterlayerMaterial::new(&self.name, self.density, self.poisson, chain, self.wlf, t_ref)
    }
}

impl MaterialDatabase {
    pub fn from_json(text: &str) -> Result<Self> {
        let db: Self = serde_json::from_str(text)?;
        db.validate()?;
        Ok(db)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn builtin() -> &'static MaterialDatabase {
        static DB: OnceLock<MaterialDatabase> = OnceLock::new();
        DB.get_or_init(|| MaterialDatabase::from_json(BUILTIN_JSON).expect("built-in material table is valid"))
    }

    fn validate(&self) -> Result<()> {
        let mut seen = BTreeMap::new();
        for name in self
            .glass
            .iter()
            .map(|g| &g.name)
            .chain(self.interlayers.iter().map(|i| &i.name))
        {
            if seen.insert(name.clone(), ()).is_some() {
                return Err(Error::Config(format!("duplicate material `{name}`")));
            }
        }
        for g in &self.glass {
            g.to_material()?;
        }
        for i in &self.interlayers {
            i.to_material()?;
        }
        Ok(())
    }

    pub fn names(&self) -> Vec<&str> {
        self.glass
            .iter()
            .map(|g| g.name.as_str())
            .chain(self.interlayers.iter().map(|i| i.name.as_str()))
            .collect()
    }

    pub fn material(&self, name: &str) -> Result<Material> {
        if let Some(g) = self.glass.iter().find(|g| g.name == name) {
            return Ok(Material::Glass(g.to_material()?));
        }
        if let Some(i) = self.interlayers.iter().find(|i| i.name == name) {
            return Ok(Material::Interlayer(i.to_material()?));
        }
        Err(Error::UnknownMaterial(name.to_string()))
    }

    pub fn glass(&self, name: &str) -> Result<GlassMaterial> {
        match self.material(name)? {
            Material::Glass(g) => Ok(g),
            Material::Interlayer(_) => Err(Error::Config(format!("`{name}` is not a glass"))),
        }
    }

    pub fn interlayer(&self, name: &str) -> Result<InterlayerMaterial> {
        match self.material(name)? {
            Material::Interlayer(i) => Ok(i),
            Material::Glass(_) => Err(Error::Config(format!("`{name}` is not an interlayer"))),
        }
    }
}

/// Look up a record of the built-in database
/// (`glass`, `SGP_M`, `TPU_M`, `PVB_M`, `PVB_S`, `PVB_A`).
pub fn builtin_material(name: &str) -> Result<Material> {
    MaterialDatabase::builtin().material(name)
}

pub fn builtin_glass() -> GlassMaterial {
    MaterialDatabase::builtin()
        .glass("glass")
        .expect("built-in glass record")
}

pub fn builtin_interlayer(name: &str) -> Result<InterlayerMaterial> {
    MaterialDatabase::builtin().interlayer(name)
}

/// Names of the built-in interlayers in table order.
pub const BUILTIN_INTERLAYERS: [&str; 5] = ["SGP_M", "TPU_M", "PVB_M", "PVB_S", "PVB_A"];

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn instantaneous_modulus_of_tables() {
        let sgp = builtin_interlayer("SGP_M").unwrap();
        // published G_{2,0} = 274.1 MPa; the tabulated ratios sum to 0.99335
        // and are used verbatim, so the reconstruction is 274.077 MPa.
        assert!(rel(sgp.chain.instantaneous_modulus(), 274.1e6) < 1e-3);
        assert!(rel(sgp.chain.instantaneous_modulus(), 274.077_235e6) < 1e-12);

        let empty = MaxwellChain::elastic(5.0).unwrap();
        assert_eq!(empty.instantaneous_modulus(), 5.0);

        let pvb_s = builtin_interlayer("PVB_S").unwrap();
        let table = [
            51.25, 31.75, 12.80, 32.90, 39.90, 37.80, 21.94, 25.01, 27.58, 11.98, 6.345, 2.692, 8.718, 0.6969,
        ];
        let sum: f64 = table.iter().sum::<f64>() * 1e6;
        assert!(rel(pvb_s.chain.instantaneous_modulus(), sum) < 1e-14);
        assert!(rel(sum, 311.3619e6) < 1e-12);
    }

    #[test]
    fn relaxation_limits() {
        for name in BUILTIN_INTERLAYERS {
            let ch = builtin_interlayer(name).unwrap().chain;
            assert_eq!(ch.relaxation_modulus(0.0).unwrap(), ch.instantaneous_modulus());
            let tmax = ch.units().iter().map(|u| u.relaxation_time).fold(0.0, f64::max);
            let g_late = ch.relaxation_modulus(1e9 * tmax).unwrap();
            assert!((g_late - ch.long_term_modulus()).abs() <= 1e-12 * ch.instantaneous_modulus());
        }
        let ch = builtin_interlayer("PVB_M").unwrap().chain;
        assert!(ch.relaxation_modulus(-1.0).is_err());
    }

    #[test]
    fn relaxation_modulus_sgp_at_one_second() {
        // 40-digit mpmath summation of the Prony series with the tabulated data.
        let ch = builtin_interlayer("SGP_M").unwrap().chain;
        let expected = 136_940_619.186_848_02;
        assert!(rel(ch.relaxation_modulus(1.0).unwrap(), expected) < 1e-13);
    }

    #[test]
    fn frequency_part_static_and_instantaneous_limits() {
        for name in BUILTIN_INTERLAYERS {
            let ch = builtin_interlayer(name).unwrap().chain;
            let g0 = ch.instantaneous_modulus();
            let fr0 = ch.frequency_part(c(0.0)).unwrap().value();
            assert!((fr0.re + g0 - ch.long_term_modulus()).abs() < 1e-9 * g0);
            assert_eq!(fr0.im, 0.0);
            let fr_inf = ch.frequency_part(c(1e30)).unwrap().value();
            assert!(fr_inf.norm() < 1e-9 * g0);
        }
    }

    #[test]
    fn elastic_chain_modulus_is_real_constant() {
        let ch = MaxwellChain::elastic(3.0e6).unwrap();
        for w in [0.0, 1.0, 1e4] {
            let g = ch.complex_modulus(c(w)).unwrap().value();
            assert_eq!(g, Complex64::new(3.0e6, 0.0));
        }
        assert_eq!(
            ch.frequency_part_derivative(Complex64::new(3.0, 1.0)).unwrap(),
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn derivative_single_unit_at_zero() {
        let ch = MaxwellChain::new(0.0, vec![MaxwellUnit::new(2.0, 0.5).unwrap()]).unwrap();
        let d = ch.frequency_part_derivative(c(0.0)).unwrap();
        assert_eq!(d, Complex64::new(0.0, 1.0));
    }

    #[test]
    fn pole_is_rejected() {
        let ch = MaxwellChain::new(0.0, vec![MaxwellUnit::new(2.0, 0.5).unwrap()]).unwrap();
        // 1 + iωθ = 0  <=>  ω = i/θ
        let pole = Complex64::new(0.0, 2.0);
        assert!(matches!(ch.frequency_part(pole), Err(Error::Singular(_))));
        assert!(ch.frequency_part_derivative(pole).is_err());
    }

    #[test]
    fn wlf_shift_values() {
        let pvb_s = builtin_interlayer("PVB_S").unwrap();
        let w = pvb_s.wlf.unwrap();
        let a = w.shift_factor(25.0).unwrap();
        let expected = 10f64.powf(-37.30 * 4.54 / 208.15);
        assert!(rel(a, expected) < 1e-12);
        let pvb_a = builtin_interlayer("PVB_A").unwrap();
        assert_eq!(pvb_a.wlf.unwrap().shift_factor(30.0).unwrap(), 1.0);
        let bad = WlfShift {
            reference_temperature: 0.0,
            c1: 1.0,
            c2: 10.0,
        };
        assert!(bad.shift_factor(-10.0).is_err());
    }

    #[test]
    fn shifted_chain_scales_times_only() {
        let pvb_a = builtin_interlayer("PVB_A").unwrap();
        let wlf = pvb_a.wlf.unwrap();
        assert_eq!(shifted_chain(&pvb_a.chain, &wlf, 30.0).unwrap(), pvb_a.chain);
        let a = wlf.shift_factor(50.0).unwrap();
        let hot = pvb_a.chain_at(50.0).unwrap();
        assert_eq!(hot.units().len(), 10);
        for (u, v) in pvb_a.chain.units().iter().zip(hot.units()) {
            assert_eq!(u.shear_modulus, v.shear_modulus);
            assert!(rel(v.relaxation_time, u.relaxation_time * a) < 1e-15);
        }
        let ch = MaxwellChain::new(1.0, vec![MaxwellUnit::new(1.0, 1.0).unwrap()]).unwrap();
        let fast = ch.with_scaled_times(0.1).unwrap();
        assert!(rel(fast.units()[0].relaxation_time, 0.1) < 1e-15);
    }

    #[test]
    fn missing_wlf_is_configuration_error() {
        let pvb_m = builtin_interlayer("PVB_M").unwrap();
        assert!(pvb_m.chain_at(25.0).is_ok());
        assert!(matches!(pvb_m.chain_at(50.0), Err(Error::Config(_))));
    }

    #[test]
    fn builtin_records() {
        let Material::Glass(g) = builtin_material("glass").unwrap() else {
            panic!("glass expected")
        };
        assert_eq!(g.young_modulus, 72e9);
        assert_eq!(g.poisson_ratio, 0.22);
        assert_eq!(g.density, 2500.0);

        let sgp = builtin_interlayer("SGP_M").unwrap();
        assert_eq!(sgp.density, 950.0);
        assert_eq!(sgp.poisson_ratio, 0.49);
        assert_eq!(sgp.chain.long_term_modulus(), 1.8e6);
        assert_eq!(sgp.chain.units().len(), 12);
        assert_eq!(sgp.chain.units()[0].relaxation_time, 1e-6);
        assert_eq!(sgp.chain.units()[11].relaxation_time, 1e5);
        assert!(rel(sgp.chain.units()[0].shear_modulus, 0.07767 * 274.1e6) < 1e-15);

        let pvb_a = builtin_interlayer("PVB_A").unwrap();
        assert_eq!(pvb_a.chain.units().len(), 10);
        assert!(rel(pvb_a.chain.units()[0].shear_modulus, 0.514628e6) < 1e-15);
        assert_eq!(pvb_a.chain.units()[0].relaxation_time, 9.51e-2);

        assert!(matches!(builtin_material("EVA"), Err(Error::UnknownMaterial(_))));
    }

    #[test]
    fn database_json_round_trip() {
        let db = MaterialDatabase::builtin();
        let text = db.to_json().unwrap();
        let back = MaterialDatabase::from_json(&text).unwrap();
        assert_eq!(&back, db);
    }

    #[test]
    fn database_rejects_ambiguous_unit() {
        let text = r#"{"glass": [], "interlayers": [{"name": "X", "density": 1000, "poisson": 0.4,
            "g_inf_mpa": 1.0, "units": [{"g_mpa": 1.0, "g_ratio": 0.1, "theta_s": 1.0}]}]}"#;
        assert!(MaterialDatabase::from_json(text).is_err());
    }

    #[test]
    fn invalid_constructors() {
        assert!(MaxwellUnit::new(0.0, 1.0).is_err());
        assert!(MaxwellUnit::new(1.0, -1.0).is_err());
        assert!(MaxwellChain::new(0.0, vec![]).is_err());
        assert!(GlassMaterial::new(1.0, 0.5, 1.0).is_err());
        assert!(InterlayerMaterial::elastic("x", 1.0, 0.5, 1.0).is_err());
    }
}

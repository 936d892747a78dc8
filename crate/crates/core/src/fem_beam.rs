//! Three-layer Timoshenko beam element and global assembly.
//!
//! Each layer is a two-node Timoshenko beam with linear interpolation of the
//! axial displacement `u`, deflection `w` and rotation `φ` (layer kinematics
//! `u(z) = u + zφ`, shear strain `γ = w' + φ`). Axial, bending and inertia
//! terms use two-point Gauss quadrature; the shear term uses one point.
//!
//! Perfect adhesion between layers gives eight compatibility equations per
//! element, which eliminate the interlayer DOFs and the deflections of the
//! top glass ply. The remaining five DOFs per node are
//! `[u1, w1, φ1, u3, φ3]`.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use nalgebra::{SMatrix, SVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::band::BandMatrix;
use crate::error::{Error, Result};
use crate::materials::{GlassMaterial, InterlayerMaterial, MaxwellChain};

pub type Matrix6 = SMatrix<f64, 6, 6>;
pub type Matrix10 = SMatrix<f64, 10, 10>;
pub type Transformation = SMatrix<f64, 18, 10>;

/// Shear correction factor of the glass plies (rectangular section).
pub const SHEAR_CORRECTION: f64 = 5.0 / 6.0;

/// Shear correction factor of the interlayer. The thin core carries a
/// uniform shear strain through its thickness, as in sandwich theory.
pub const INTERLAYER_SHEAR_CORRECTION: f64 = 1.0;

/// Master DOFs per node: `u1, w1, φ1, u3, φ3`.
pub const DOFS_PER_NODE: usize = 5;

/// Half-bandwidth of every assembled matrix.
pub const BANDWIDTH: usize = 2 * DOFS_PER_NODE - 1;

const GAUSS_2: [f64; 2] = [-0.577_350_269_189_625_8, 0.577_350_269_189_625_8];

/// Layer thicknesses and width [m]. Layer 1 is the bottom glass ply.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossSection {
    pub h1: f64,
    pub h2: f64,
    pub h3: f64,
    pub b: f64,
}

impl CrossSection {
    pub fn new(h1: f64, h2: f64, h3: f64, b: f64) -> Result<Self> {
        for (name, v) in [("h1", h1), ("h2", h2), ("h3", h3), ("b", b)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self { h1, h2, h3, b })
    }

    /// Thicknesses and width in millimetres.
    pub fn from_mm(h1: f64, h2: f64, h3: f64, b: f64) -> Result<Self> {
        Self::new(h1 * 1e-3, h2 * 1e-3, h3 * 1e-3, b * 1e-3)
    }

    pub fn total_thickness(&self) -> f64 {
        self.h1 + self.h2 + self.h3
    }

    /// Distance between the glass ply mid-planes.
    pub fn ply_distance(&self) -> f64 {
        0.5 * self.h1 + self.h2 + 0.5 * self.h3
    }

    /// Parses `h1/h2/h3` in millimetres.
    pub fn parse_mm(text: &str, width_mm: f64) -> Result<Self> {
        let parts: Vec<f64> = text
            .split('/')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::InvalidParameter(format!("section `{text}`: {e}")))?;
        match parts.as_slice() {
            [h1, h2, h3] => Self::from_mm(*h1, *h2, *h3, width_mm),
            _ => Err(Error::InvalidParameter(format!("section `{text}` must read h1/h2/h3"))),
        }
    }

    /// `h1/h2/h3` in millimetres.
    pub fn label_mm(&self) -> String {
        let mm = |h: f64| (h * 1e9).round() / 1e6;
        format!("{}/{}/{}", mm(self.h1), mm(self.h2), mm(self.h3))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BoundaryCondition {
    #[serde(rename = "ss")]
    SimplySupported,
    #[serde(rename = "cc")]
    ClampedClamped,
    #[serde(rename = "ff")]
    FreeFree,
}

impl BoundaryCondition {
    pub const ALL: [BoundaryCondition; 3] = [
        BoundaryCondition::SimplySupported,
        BoundaryCondition::FreeFree,
        BoundaryCondition::ClampedClamped,
    ];

    pub fn label(self) -> &'static str {
        match self {
            BoundaryCondition::SimplySupported => "SS",
            BoundaryCondition::ClampedClamped => "CC",
            BoundaryCondition::FreeFree => "FF",
        }
    }

    /// Number of zero-frequency modes of the constrained system.
    pub fn rigid_modes(self) -> usize {
        match self {
            BoundaryCondition::FreeFree => 3,
            _ => 0,
        }
    }
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for BoundaryCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "").as_str() {
            "ss" | "simplysupported" => Ok(Self::SimplySupported),
            "cc" | "clampedclamped" => Ok(Self::ClampedClamped),
            "ff" | "freefree" => Ok(Self::FreeFree),
            _ => Err(Error::InvalidParameter(format!(
                "unknown boundary condition `{s}` (expected ss, cc or ff)"
            ))),
        }
    }
}

/// Three-layer laminated glass beam.
#[derive(Debug, Clone, PartialEq)]
pub struct LaminatedBeam {
    pub length: f64,
    pub section: CrossSection,
    pub glass1: GlassMaterial,
    pub glass3: GlassMaterial,
    pub interlayer: InterlayerMaterial,
    pub bc: BoundaryCondition,
    /// Ambient temperature [°C].
    pub temperature: f64,
}

impl LaminatedBeam {
    pub fn new(
        length: f64,
        section: CrossSection,
        glass1: GlassMaterial,
        glass3: GlassMaterial,
        interlayer: InterlayerMaterial,
        bc: BoundaryCondition,
        temperature: f64,
    ) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "length must be positive, got {length}"
            )));
        }
        let beam = Self {
            length,
            section,
            glass1,
            glass3,
            interlayer,
            bc,
            temperature,
        };
        beam.chain()?;
        Ok(beam)
    }

    /// Interlayer chain shifted to the beam temperature.
    pub fn chain(&self) -> Result<MaxwellChain> {
        self.interlayer.chain_at(self.temperature)
    }

    /// Mass per unit length and width, `ρ1 h1 + ρ2 h2 + ρ3 h3`.
    pub fn areal_mass(&self) -> f64 {
        let s = &self.section;
        self.glass1.density * s.h1 + self.interlayer.density * s.h2 + self.glass3.density * s.h3
    }

    pub fn identical_glass(&self) -> bool {
        self.glass1 == self.glass3
    }
}

/// Stiffness and density of one layer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerProps {
    pub young: f64,
    pub shear: f64,
    pub density: f64,
}

/// Stiffness and consistent mass of a single Timoshenko layer element with
/// DOFs `(u_L, w_L, φ_L, u_R, w_R, φ_R)`; `ks` is the shear correction factor.
pub fn layer_element_matrices(e: f64, g: f64, ks: f64, rho: f64, h: f64, b: f64, le: f64) -> (Matrix6, Matrix6) {
    let area = b * h;
    let inertia = b * h.powi(3) / 12.0;
    let jac = 0.5 * le;
    let dn = [-1.0 / le, 1.0 / le];

    let mut k = Matrix6::zeros();
    let mut m = Matrix6::zeros();
    for &xi in &GAUSS_2 {
        let n = [0.5 * (1.0 - xi), 0.5 * (1.0 + xi)];
        let axial = SVector::<f64, 6>::from_column_slice(&[dn[0], 0.0, 0.0, dn[1], 0.0, 0.0]);
        let bend = SVector::<f64, 6>::from_column_slice(&[0.0, 0.0, dn[0], 0.0, 0.0, dn[1]]);
        k += axial * axial.transpose() * (e * area * jac);
        k += bend * bend.transpose() * (e * inertia * jac);

        let nu = SVector::<f64, 6>::from_column_slice(&[n[0], 0.0, 0.0, n[1], 0.0, 0.0]);
        let nw = SVector::<f64, 6>::from_column_slice(&[0.0, n[0], 0.0, 0.0, n[1], 0.0]);
        let nphi = SVector::<f64, 6>::from_column_slice(&[0.0, 0.0, n[0], 0.0, 0.0, n[1]]);
        m += (nu * nu.transpose() + nw * nw.transpose()) * (rho * area * jac);
        m += nphi * nphi.transpose() * (rho * inertia * jac);
    }
    // one-point rule for the shear strain w' + φ
    let shear = SVector::<f64, 6>::from_column_slice(&[0.0, dn[0], 0.5, 0.0, dn[1], 0.5]);
    k += shear * shear.transpose() * (ks * g * area * 2.0 * jac);
    (k, m)
}

/// Maps the ten master DOFs
/// `[u1L w1L φ1L u3L φ3L u1R w1R φ1R u3R φ3R]` onto the full element vector
/// `[u1L w1L φ1L u1R w1R φ1R u2L w2L φ2L u2R w2R φ2R u3L w3L φ3L u3R w3R φ3R]`.
pub fn transformation_matrix(section: &CrossSection) -> Transformation {
    let CrossSection { h1, h2, h3, .. } = *section;
    let mut t = Transformation::zeros();
    // glass ply 1
    t[(0, 0)] = 1.0;
    t[(1, 1)] = 1.0;
    t[(2, 2)] = 1.0;
    t[(3, 5)] = 1.0;
    t[(4, 6)] = 1.0;
    t[(5, 7)] = 1.0;
    // interlayer, left then right node
    for (row, col) in [(6, 0), (9, 5)] {
        t[(row, col)] = 0.5;
        t[(row, col + 2)] = h1 / 4.0;
        t[(row, col + 3)] = 0.5;
        t[(row, col + 4)] = -h3 / 4.0;

        t[(row + 1, col + 1)] = 1.0;

        t[(row + 2, col)] = -1.0 / h2;
        t[(row + 2, col + 2)] = -h1 / (2.0 * h2);
        t[(row + 2, col + 3)] = 1.0 / h2;
        t[(row + 2, col + 4)] = -h3 / (2.0 * h2);
    }
    // glass ply 3
    t[(12, 3)] = 1.0;
    t[(13, 1)] = 1.0;
    t[(14, 4)] = 1.0;
    t[(15, 8)] = 1.0;
    t[(16, 6)] = 1.0;
    t[(17, 9)] = 1.0;
    t
}

/// Condensed 10×10 stiffness and mass of one three-layer element.
///
/// With `unit_interlayer_shear` set, the stiffness is the contribution of an
/// interlayer with unit shear modulus (and `E = 2(1+ν2)` through the ratio
/// `young/shear` of `layers[1]`) while the glass plies contribute nothing.
pub fn condensed_element(
    section: &CrossSection,
    layers: &[LayerProps; 3],
    le: f64,
    unit_interlayer_shear: bool,
) -> (Matrix10, Matrix10) {
    let h = [section.h1, section.h2, section.h3];
    let mut k_full = SMatrix::<f64, 18, 18>::zeros();
    let mut m_full = SMatrix::<f64, 18, 18>::zeros();
    for (i, props) in layers.iter().enumerate() {
        let (e, g) = match (unit_interlayer_shear, i) {
            (false, _) => (props.young, props.shear),
            (true, 1) => (props.young / props.shear, 1.0),
            (true, _) => (0.0, 0.0),
        };
        let ks = if i == 1 {
            INTERLAYER_SHEAR_CORRECTION
        } else {
            SHEAR_CORRECTION
        };
        let (k, m) = layer_element_matrices(e, g, ks, props.density, h[i], section.b, le);
        k_full.fixed_view_mut::<6, 6>(6 * i, 6 * i).copy_from(&k);
        m_full.fixed_view_mut::<6, 6>(6 * i, 6 * i).copy_from(&m);
    }
    let t = transformation_matrix(section);
    (t.transpose() * k_full * t, t.transpose() * m_full * t)
}

/// Global matrices of a laminated beam,
/// `K(ω) = K0 + G*_fr(ω) Kc` and the mass matrix `M`.
#[derive(Debug, Clone)]
pub struct AssembledSystem {
    pub k0: BandMatrix<f64>,
    /// Interlayer stiffness per unit shear modulus [1/Pa scaled].
    pub kc: BandMatrix<f64>,
    pub m: BandMatrix<f64>,
    /// Number of DOFs before constraints.
    pub dof_count: usize,
    /// Eliminated DOFs (full numbering).
    pub constrained_dofs: Vec<usize>,
    /// Full-numbering index of every retained DOF.
    pub free_dofs: Vec<usize>,
    pub node_x: Vec<f64>,
    pub bc: Option<BoundaryCondition>,
    /// `G_{2,0}` used in `K0`.
    pub instantaneous_modulus: f64,
}

impl AssembledSystem {
    /// Size of the (possibly reduced) matrices.
    pub fn size(&self) -> usize {
        self.k0.size()
    }

    /// `K0 + g_fr Kc`.
    pub fn stiffness(&self, g_fr: Complex64) -> BandMatrix<Complex64> {
        BandMatrix::combine_complex(&[(Complex64::new(1.0, 0.0), &self.k0), (g_fr, &self.kc)])
    }

    /// `K0 + g Kc` for real `g`.
    pub fn real_stiffness(&self, g: f64) -> BandMatrix<f64> {
        BandMatrix::combine(&[(1.0, &self.k0), (g, &self.kc)])
    }

    /// `T(ω) = K0 + G*_fr(ω) Kc - ω² M`.
    pub fn dynamic_matrix(&self, g_fr: Complex64, omega_squared: Complex64) -> BandMatrix<Complex64> {
        BandMatrix::combine_complex(&[
            (Complex64::new(1.0, 0.0), &self.k0),
            (g_fr, &self.kc),
            (-omega_squared, &self.m),
        ])
    }

    /// Scatter a reduced vector back to full numbering (zeros at constraints).
    pub fn expand<T: Copy + Default>(&self, reduced: &[T]) -> Vec<T> {
        let mut full = vec![T::default(); self.dof_count];
        for (&dof, &v) in self.free_dofs.iter().zip(reduced) {
            full[dof] = v;
        }
        full
    }

    /// Write `K0`, `Kc` and `M` as MatrixMarket files into `dir`.
    pub fn export_coordinate(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        for (name, mat) in [("k0.mtx", &self.k0), ("kc.mtx", &self.kc), ("m.mtx", &self.m)] {
            let file = std::fs::File::create(dir.join(name))?;
            mat.write_coordinate(std::io::BufWriter::new(file))?;
        }
        Ok(())
    }
}

fn layer_props(beam: &LaminatedBeam, g_interlayer: f64) -> [LayerProps; 3] {
    [
        LayerProps {
            young: beam.glass1.young_modulus,
            shear: beam.glass1.shear_modulus(),
            density: beam.glass1.density,
        },
        LayerProps {
            young: beam.interlayer.young_from_shear(g_interlayer),
            shear: g_interlayer,
            density: beam.interlayer.density,
        },
        LayerProps {
            young: beam.glass3.young_modulus,
            shear: beam.glass3.shear_modulus(),
            density: beam.glass3.density,
        },
    ]
}

/// Assemble `K0`, `Kc` and `M` on a uniform mesh of `elements` elements
/// shared by all layers. No boundary conditions are applied.
pub fn assemble(beam: &LaminatedBeam, elements: usize) -> Result<AssembledSystem> {
    let g0 = beam.chain()?.instantaneous_modulus();
    assemble_with_modulus(beam, elements, g0)
}

/// As [`assemble`], with `K0` built for interlayer modulus `g` instead of
/// the instantaneous one.
pub fn assemble_with_modulus(beam: &LaminatedBeam, elements: usize, g: f64) -> Result<AssembledSystem> {
    if elements < 2 {
        return Err(Error::InvalidParameter(format!(
            "at least two elements are required, got {elements}"
        )));
    }
    let le = beam.length / elements as f64;
    let nodes = elements + 1;
    let n = DOFS_PER_NODE * nodes;

    // the interlayer props only set E/G for the unit matrix here
    let mut glass_only = layer_props(beam, 1.0);
    glass_only[1].young = 0.0;
    glass_only[1].shear = 0.0;
    let unit = layer_props(beam, 1.0);

    let (k_glass_e, m_e) = condensed_element(&beam.section, &glass_only, le, false);
    let (kc_e, _) = condensed_element(&beam.section, &unit, le, true);

    let mut k_glass = BandMatrix::zeros(n, BANDWIDTH);
    let mut kc = BandMatrix::zeros(n, BANDWIDTH);
    let mut m = BandMatrix::zeros(n, BANDWIDTH);
    for e in 0..elements {
        let base = DOFS_PER_NODE * e;
        for a in 0..10 {
            for b in 0..10 {
                k_glass.add(base + a, base + b, k_glass_e[(a, b)]);
                kc.add(base + a, base + b, kc_e[(a, b)]);
                m.add(base + a, base + b, m_e[(a, b)]);
            }
        }
    }
    let k0 = BandMatrix::combine(&[(1.0, &k_glass), (g, &kc)]);
    Ok(AssembledSystem {
        k0,
        kc,
        m,
        dof_count: n,
        constrained_dofs: Vec::new(),
        free_dofs: (0..n).collect(),
        node_x: (0..nodes).map(|i| i as f64 * le).collect(),
        bc: None,
        instantaneous_modulus: g,
    })
}

/// Constrained DOFs (full numbering) for a mesh with `nodes` nodes.
///
/// Simply supported: `w1` at both ends and `u1` at the left end.
/// Clamped: all five master DOFs at both ends. Free: none.
pub fn constrained_dofs(bc: BoundaryCondition, nodes: usize) -> Vec<usize> {
    let last = DOFS_PER_NODE * (nodes - 1);
    match bc {
        BoundaryCondition::SimplySupported => vec![0, 1, last + 1],
        BoundaryCondition::ClampedClamped => (0..DOFS_PER_NODE).chain(last..last + DOFS_PER_NODE).collect(),
        BoundaryCondition::FreeFree => Vec::new(),
    }
}

/// Eliminate the rows and columns of the constrained DOFs.
pub fn apply_bc(system: &AssembledSystem, bc: BoundaryCondition) -> AssembledSystem {
    let mut fixed = constrained_dofs(bc, system.node_x.len());
    fixed.sort_unstable();
    let keep: Vec<usize> = (0..system.dof_count)
        .filter(|d| fixed.binary_search(d).is_err())
        .collect();
    AssembledSystem {
        k0: system.k0.submatrix(&keep),
        kc: system.kc.submatrix(&keep),
        m: system.m.submatrix(&keep),
        dof_count: system.dof_count,
        constrained_dofs: fixed,
        free_dofs: keep,
        node_x: system.node_x.clone(),
        bc: Some(bc),
        instantaneous_modulus: system.instantaneous_modulus,
    }
}

/// Assemble and constrain in one step.
pub fn build_system(beam: &LaminatedBeam, elements: usize) -> Result<AssembledSystem> {
    Ok(apply_bc(&assemble(beam, elements)?, beam.bc))
}

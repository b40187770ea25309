//! A catalog of 18 classic box-constrained test functions with their
//! published minima, used by the experiment harness and the CLI.
//!
//! Each entry carries its standard search box and the known minimum
//! (value, minimizers, and a verification tolerance). Most optima are exact
//! closed-form values; a few functions only have published *rounded*
//! minimizers, so their declared minima carry a looser tolerance tier and,
//! where the published value itself is rounded, the declared value is the
//! precise evaluation at the published minimizer.

use nalgebra::DVector;
use std::f64::consts::{E, PI, TAU};

use crate::domain::{BoxDomain, Objective};
use crate::error::{Error, Result};

/// Identifies one catalog entry. The discriminant order is the catalog
/// order; 1-based indices come from [`BenchmarkId::index`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BenchmarkId {
    Ackley,
    Sphere,
    Rosenbrock,
    Beale,
    GoldsteinPrice,
    Booth,
    BukinN6,
    Matyas,
    LeviN13,
    ThreeHumpCamel,
    Easom,
    CrossInTray,
    Eggholder,
    HolderTable,
    McCormick,
    SchafferN2,
    SchafferN4,
    StyblinskiTang,
}

impl BenchmarkId {
    /// Every entry, in catalog order.
    pub const ALL: [BenchmarkId; 18] = [
        BenchmarkId::Ackley,
        BenchmarkId::Sphere,
        BenchmarkId::Rosenbrock,
        BenchmarkId::Beale,
        BenchmarkId::GoldsteinPrice,
        BenchmarkId::Booth,
        BenchmarkId::BukinN6,
        BenchmarkId::Matyas,
        BenchmarkId::LeviN13,
        BenchmarkId::ThreeHumpCamel,
        BenchmarkId::Easom,
        BenchmarkId::CrossInTray,
        BenchmarkId::Eggholder,
        BenchmarkId::HolderTable,
        BenchmarkId::McCormick,
        BenchmarkId::SchafferN2,
        BenchmarkId::SchafferN4,
        BenchmarkId::StyblinskiTang,
    ];

    /// 1-based catalog index.
    pub fn index(self) -> usize {
        Self::ALL.iter().position(|&id| id == self).expect("id is in ALL") + 1
    }

    /// Entry for a 1-based catalog index.
    pub fn from_index(index: usize) -> Option<Self> {
        (1..=Self::ALL.len()).contains(&index).then(|| Self::ALL[index - 1])
    }

    /// Canonical kebab-case name.
    pub fn name(self) -> &'static str {
        match self {
            BenchmarkId::Ackley => "ackley",
            BenchmarkId::Sphere => "sphere",
            BenchmarkId::Rosenbrock => "rosenbrock",
            BenchmarkId::Beale => "beale",
            BenchmarkId::GoldsteinPrice => "goldstein-price",
            BenchmarkId::Booth => "booth",
            BenchmarkId::BukinN6 => "bukin-n6",
            BenchmarkId::Matyas => "matyas",
            BenchmarkId::LeviN13 => "levi-n13",
            BenchmarkId::ThreeHumpCamel => "three-hump-camel",
            BenchmarkId::Easom => "easom",
            BenchmarkId::CrossInTray => "cross-in-tray",
            BenchmarkId::Eggholder => "eggholder",
            BenchmarkId::HolderTable => "holder-table",
            BenchmarkId::McCormick => "mccormick",
            BenchmarkId::SchafferN2 => "schaffer-n2",
            BenchmarkId::SchafferN4 => "schaffer-n4",
            BenchmarkId::StyblinskiTang => "styblinski-tang",
        }
    }

    /// Case-insensitive name lookup; underscores are accepted for hyphens.
    pub fn from_name(raw: &str) -> Option<Self> {
        let key = raw.trim().to_ascii_lowercase().replace('_', "-");
        Self::ALL.iter().copied().find(|id| id.name() == key)
    }

    /// Resolves either a canonical name or a 1-based catalog index.
    pub fn parse(token: &str) -> Option<Self> {
        if let Ok(index) = token.trim().parse::<usize>() {
            return Self::from_index(index);
        }
        Self::from_name(token)
    }

    /// Whether the function is defined for any dimension (the rest are 2-D).
    pub fn is_parametric(self) -> bool {
        matches!(
            self,
            BenchmarkId::Sphere | BenchmarkId::Rosenbrock | BenchmarkId::StyblinskiTang
        )
    }

    /// Dimension used when none is requested.
    pub fn default_dim(self) -> usize {
        match self {
            BenchmarkId::Sphere => 10,
            BenchmarkId::Rosenbrock => 3,
            _ => 2,
        }
    }

    fn domain(self, dim: usize) -> BoxDomain {
        let cube = |half: f64| BoxDomain::cube(-half, half, dim).expect("static bounds");
        match self {
            BenchmarkId::Ackley | BenchmarkId::ThreeHumpCamel | BenchmarkId::StyblinskiTang => {
                cube(5.0)
            }
            BenchmarkId::Sphere => cube(5.12),
            BenchmarkId::Rosenbrock => cube(2.048),
            BenchmarkId::Beale => cube(4.5),
            BenchmarkId::GoldsteinPrice => cube(2.0),
            BenchmarkId::Booth
            | BenchmarkId::Matyas
            | BenchmarkId::LeviN13
            | BenchmarkId::CrossInTray
            | BenchmarkId::HolderTable => cube(10.0),
            BenchmarkId::Easom | BenchmarkId::SchafferN2 | BenchmarkId::SchafferN4 => cube(100.0),
            BenchmarkId::Eggholder => cube(512.0),
            BenchmarkId::BukinN6 => BoxDomain::new(
                DVector::from_vec(vec![-15.0, -3.0]),
                DVector::from_vec(vec![-5.0, 3.0]),
            )
            .expect("static bounds"),
            BenchmarkId::McCormick => BoxDomain::new(
                DVector::from_vec(vec![-1.5, -3.0]),
                DVector::from_vec(vec![4.0, 4.0]),
            )
            .expect("static bounds"),
        }
    }
}

impl std::fmt::Display for BenchmarkId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// The known global minimum of a catalog entry: the declared value, every
/// known minimizer, and the tolerance at which evaluating the function at
/// those minimizers reproduces the value.
#[derive(Clone, Debug)]
pub struct KnownMinimum {
    pub value: f64,
    pub tolerance: f64,
    pub minimizers: Vec<DVector<f64>>,
}

/// One instantiated test function: an entry plus a concrete dimension and
/// its search box. Implements [`Objective`], so it plugs straight into the
/// optimizers.
#[derive(Clone, Debug)]
pub struct BenchmarkFunction {
    id: BenchmarkId,
    dim: usize,
    domain: BoxDomain,
}

impl BenchmarkFunction {
    /// Instantiates an entry, optionally overriding the dimension.
    ///
    /// # Errors
    ///
    /// [`Error::InvalidDimension`] when a 2-D function gets a dimension
    /// other than 2, or a parametric one gets a dimension its formula cannot
    /// support (Rosenbrock needs at least 2, the others at least 1).
    pub fn new(id: BenchmarkId, dim: Option<usize>) -> Result<Self> {
        let dim = dim.unwrap_or_else(|| id.default_dim());
        let min_dim = match id {
            BenchmarkId::Rosenbrock => 2,
            _ => 1,
        };
        let valid = if id.is_parametric() { dim >= min_dim } else { dim == 2 };
        if !valid {
            return Err(Error::InvalidDimension {
                name: id.name(),
                expected: if id.is_parametric() { min_dim } else { 2 },
                requested: dim,
                adjustable: id.is_parametric(),
            });
        }
        Ok(Self {
            id,
            dim,
            domain: id.domain(dim),
        })
    }

    pub fn id(&self) -> BenchmarkId {
        self.id
    }

    pub fn name(&self) -> &'static str {
        self.id.name()
    }

    /// Search-space dimension of this instantiation.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// 1-based catalog index.
    pub fn index(&self) -> usize {
        self.id.index()
    }

    /// Evaluates with full dimension and domain checking — the safe entry
    /// point for unvetted input. Optimizer loops call the unchecked
    /// [`Objective::eval`] instead, which assumes in-box points.
    ///
    /// # Errors
    ///
    /// [`Error::DimensionMismatch`] or [`Error::OutOfDomain`] naming the
    /// first offending coordinate.
    pub fn evaluate(&self, x: &DVector<f64>) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: x.len(),
            });
        }
        for index in 0..self.dim {
            let (value, lower, upper) =
                (x[index], self.domain.lower()[index], self.domain.upper()[index]);
            if !(lower..=upper).contains(&value) {
                return Err(Error::OutOfDomain {
                    index,
                    value,
                    lower,
                    upper,
                });
            }
        }
        Ok(raw_value(self.id, x))
    }

    /// The declared global minimum for this instantiation.
    pub fn minima(&self) -> KnownMinimum {
        let point2 = |a: f64, b: f64| DVector::from_vec(vec![a, b]);
        match self.id {
            BenchmarkId::Ackley | BenchmarkId::Matyas | BenchmarkId::ThreeHumpCamel
            | BenchmarkId::SchafferN2 => KnownMinimum {
                value: 0.0,
                tolerance: 1e-9,
                minimizers: vec![point2(0.0, 0.0)],
            },
            BenchmarkId::Sphere => KnownMinimum {
                value: 0.0,
                tolerance: 1e-9,
                minimizers: vec![DVector::zeros(self.dim)],
            },
            BenchmarkId::Rosenbrock => KnownMinimum {
                value: 0.0,
                tolerance: 1e-9,
                minimizers: vec![DVector::from_element(self.dim, 1.0)],
            },
            BenchmarkId::Beale => KnownMinimum {
                value: 0.0,
                tolerance: 1e-9,
                minimizers: vec![point2(3.0, 0.5)],
            },
            BenchmarkId::GoldsteinPrice => KnownMinimum {
                value: 3.0,
                tolerance: 1e-9,
                minimizers: vec![point2(0.0, -1.0)],
            },
            BenchmarkId::Booth => KnownMinimum {
                value: 0.0,
                tolerance: 1e-9,
                minimizers: vec![point2(1.0, 3.0)],
            },
            BenchmarkId::BukinN6 => KnownMinimum {
                value: 0.0,
                tolerance: 1e-9,
                minimizers: vec![point2(-10.0, 1.0)],
            },
            BenchmarkId::LeviN13 => KnownMinimum {
                value: 0.0,
                tolerance: 1e-9,
                minimizers: vec![point2(1.0, 1.0)],
            },
            BenchmarkId::Easom => KnownMinimum {
                value: -1.0,
                tolerance: 1e-12,
                minimizers: vec![point2(PI, PI)],
            },
            BenchmarkId::CrossInTray => KnownMinimum {
                value: -2.062611870820258,
                tolerance: 1e-6,
                minimizers: vec![
                    point2(1.34941, 1.34941),
                    point2(1.34941, -1.34941),
                    point2(-1.34941, 1.34941),
                    point2(-1.34941, -1.34941),
                ],
            },
            BenchmarkId::Eggholder => KnownMinimum {
                value: -959.6407,
                tolerance: 1e-3,
                minimizers: vec![point2(512.0, 404.2319)],
            },
            BenchmarkId::HolderTable => KnownMinimum {
                value: -19.208502567767603,
                tolerance: 1e-6,
                minimizers: vec![
                    point2(8.05502, 9.66459),
                    point2(8.05502, -9.66459),
                    point2(-8.05502, 9.66459),
                    point2(-8.05502, -9.66459),
                ],
            },
            BenchmarkId::McCormick => KnownMinimum {
                value: -1.913222954882274,
                tolerance: 1e-9,
                minimizers: vec![point2(-0.54719, -1.54719)],
            },
            BenchmarkId::SchafferN4 => KnownMinimum {
                value: 0.29257863204552975,
                tolerance: 1e-9,
                minimizers: vec![
                    point2(0.0, 1.25313),
                    point2(0.0, -1.25313),
                    point2(1.25313, 0.0),
                    point2(-1.25313, 0.0),
                ],
            },
            BenchmarkId::StyblinskiTang => KnownMinimum {
                value: -39.16599 * self.dim as f64,
                tolerance: 1e-3 * self.dim as f64,
                minimizers: vec![DVector::from_element(self.dim, -2.903534)],
            },
        }
    }
}

impl Objective for BenchmarkFunction {
    fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    fn eval(&self, x: &DVector<f64>) -> f64 {
        raw_value(self.id, x)
    }
}

impl std::fmt::Display for BenchmarkFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (n={})", self.id.name(), self.dim)
    }
}

/// All 18 entries at their default dimensions, in catalog order.
pub fn catalog() -> Vec<BenchmarkFunction> {
    BenchmarkId::ALL
        .iter()
        .map(|&id| BenchmarkFunction::new(id, None).expect("default dims are valid"))
        .collect()
}

fn raw_value(id: BenchmarkId, x: &DVector<f64>) -> f64 {
    match id {
        BenchmarkId::Ackley => {
            let (a, b) = (x[0], x[1]);
            let radial = (0.5 * (a * a + b * b)).sqrt();
            let cosine = 0.5 * ((TAU * a).cos() + (TAU * b).cos());
            20.0 - 20.0 * (-0.2 * radial).exp() + E - cosine.exp()
        }
        BenchmarkId::Sphere => x.norm_squared(),
        BenchmarkId::Rosenbrock => x
            .as_slice()
            .windows(2)
            .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (w[0] - 1.0).powi(2))
            .sum(),
        BenchmarkId::Beale => {
            let (a, b) = (x[0], x[1]);
            (1.5 - a + a * b).powi(2)
                + (2.25 - a + a * b * b).powi(2)
                + (2.625 - a + a * b * b * b).powi(2)
        }
        BenchmarkId::GoldsteinPrice => {
            let (a, b) = (x[0], x[1]);
            let first = 1.0
                + (a + b + 1.0).powi(2)
                    * (19.0 - 14.0 * a + 3.0 * a * a - 14.0 * b + 6.0 * a * b + 3.0 * b * b);
            let second = 30.0
                + (2.0 * a - 3.0 * b).powi(2)
                    * (18.0 - 32.0 * a + 12.0 * a * a + 48.0 * b - 36.0 * a * b + 27.0 * b * b);
            first * second
        }
        BenchmarkId::Booth => {
            let (a, b) = (x[0], x[1]);
            (a + 2.0 * b - 7.0).powi(2) + (2.0 * a + b - 5.0).powi(2)
        }
        BenchmarkId::BukinN6 => {
            let (a, b) = (x[0], x[1]);
            100.0 * (b - 0.01 * a * a).abs().sqrt() + 0.01 * (a + 10.0).abs()
        }
        BenchmarkId::Matyas => {
            let (a, b) = (x[0], x[1]);
            0.26 * (a * a + b * b) - 0.48 * (a * b)
        }
        BenchmarkId::LeviN13 => {
            let (a, b) = (x[0], x[1]);
            (3.0 * PI * a).sin().powi(2)
                + (a - 1.0).powi(2) * (1.0 + (3.0 * PI * b).sin().powi(2))
                + (b - 1.0).powi(2) * (1.0 + (TAU * b).sin().powi(2))
        }
        BenchmarkId::ThreeHumpCamel => {
            let (a, b) = (x[0], x[1]);
            2.0 * a * a - 1.05 * a.powi(4) + a.powi(6) / 6.0 + a * b + b * b
        }
        BenchmarkId::Easom => {
            let (a, b) = (x[0], x[1]);
            -a.cos() * b.cos() * (-((a - PI).powi(2) + (b - PI).powi(2))).exp()
        }
        BenchmarkId::CrossInTray => {
            let (a, b) = (x[0], x[1]);
            let inner = (a.sin() * b.sin() * (100.0 - a.hypot(b) / PI).abs().exp()).abs();
            -0.0001 * (inner + 1.0).powf(0.1)
        }
        BenchmarkId::Eggholder => {
            let (a, b) = (x[0], x[1]);
            -(b + 47.0) * (b + a / 2.0 + 47.0).abs().sqrt().sin()
                - a * (a - (b + 47.0)).abs().sqrt().sin()
        }
        BenchmarkId::HolderTable => {
            let (a, b) = (x[0], x[1]);
            -(a.sin() * b.cos() * (1.0 - a.hypot(b) / PI).abs().exp()).abs()
        }
        BenchmarkId::McCormick => {
            let (a, b) = (x[0], x[1]);
            (a + b).sin() + (a - b).powi(2) - 1.5 * a + 2.5 * b + 1.0
        }
        BenchmarkId::SchafferN2 => {
            let (a, b) = (x[0], x[1]);
            let numerator = (a * a - b * b).sin().powi(2) - 0.5;
            let denominator = (1.0 + 0.001 * (a * a + b * b)).powi(2);
            0.5 + numerator / denominator
        }
        BenchmarkId::SchafferN4 => {
            let (a, b) = (x[0], x[1]);
            let numerator = (a * a - b * b).abs().sin().cos().powi(2) - 0.5;
            let denominator = (1.0 + 0.001 * (a * a + b * b)).powi(2);
            0.5 + numerator / denominator
        }
        BenchmarkId::StyblinskiTang => {
            0.5 * x.iter().map(|&v| v.powi(4) - 16.0 * v * v + 5.0 * v).sum::<f64>()
        }
    }
}

//! The body mini-language: `ball`, `cube`, `simplex`, `bpn:<p>`,
//! `ellipsoid:<a>,<b>[,<c>,…]` and `poly:@<path>`.

use std::fmt;
use std::path::PathBuf;

use affsurf::asa::{affine_image_asa, bpn_asa_closed_form};
use affsurf::curvature::bpn_curvature;
use affsurf::{AffineMap, ConvexBody, HPolytope, Halfspace, VPolytope};
use serde::Deserialize;

use crate::error::CliError;

/// Default dimension when neither `--dim` nor the body fixes one.
pub const DEFAULT_DIM: usize = 2;

#[derive(Clone, Debug, PartialEq)]
pub enum BodySpec {
    Ball,
    Cube,
    Simplex,
    Bpn(f64),
    Ellipsoid(Vec<f64>),
    Poly(PathBuf),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PolyFile {
    V { dim: usize, vertices: Vec<Vec<f64>> },
    H { dim: usize, halfspaces: Vec<HalfspaceJson> },
}

#[derive(Deserialize)]
struct HalfspaceJson {
    normal: Vec<f64>,
    offset: f64,
}

fn err(spec: &str, pos: usize, msg: impl Into<String>) -> CliError {
    CliError::Parse { spec: spec.into(), pos, msg: msg.into() }
}

fn number(spec: &str, pos: usize, s: &str) -> Result<f64, CliError> {
    match s.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(err(spec, pos, format!("expected a number, found {s:?}"))),
    }
}

impl BodySpec {
    pub fn parse(spec: &str) -> Result<Self, CliError> {
        let (head, arg) = match spec.find(':') {
            Some(i) => (&spec[..i], Some((i + 1, &spec[i + 1..]))),
            None => (spec, None),
        };
        let no_arg = |b: BodySpec| match arg {
            None => Ok(b),
            Some((pos, _)) => Err(err(spec, pos - 1, format!("`{head}` takes no argument"))),
        };
        match head {
            "ball" => no_arg(BodySpec::Ball),
            "cube" => no_arg(BodySpec::Cube),
            "simplex" => no_arg(BodySpec::Simplex),
            "bpn" => {
                let (pos, a) = arg.ok_or_else(|| err(spec, spec.len(), "expected `:<p>`"))?;
                Ok(BodySpec::Bpn(number(spec, pos, a)?))
            }
            "ellipsoid" => {
                let (mut pos, a) = arg.ok_or_else(|| err(spec, spec.len(), "expected `:<a>,<b>[,…]`"))?;
                let mut axes = Vec::new();
                for part in a.split(',') {
                    axes.push(number(spec, pos, part)?);
                    pos += part.len() + 1;
                }
                if axes.len() < 2 {
                    return Err(err(spec, spec.len(), "an ellipsoid needs at least two semi-axes"));
                }
                Ok(BodySpec::Ellipsoid(axes))
            }
            "poly" => {
                let (pos, a) = arg.ok_or_else(|| err(spec, spec.len(), "expected `:@<path>`"))?;
                match a.strip_prefix('@') {
                    Some(p) if !p.is_empty() => Ok(BodySpec::Poly(PathBuf::from(p))),
                    _ => Err(err(spec, pos, "expected `@<path>`")),
                }
            }
            _ => Err(err(spec, 0, format!("unknown body `{head}`"))),
        }
    }

    /// Dimension forced by the spec itself (ellipsoid axes), if any.
    fn own_dim(&self) -> Option<usize> {
        match self {
            BodySpec::Ellipsoid(a) => Some(a.len()),
            _ => None,
        }
    }

    /// Resolves the dimension against `--dim`; conflicting values are an error.
    pub fn dim(&self, dim: Option<usize>) -> Result<usize, CliError> {
        match (self.own_dim(), dim) {
            (Some(a), Some(b)) if a != b => {
                Err(CliError::Usage(format!("body has dimension {a} but --dim is {b}")))
            }
            (Some(a), _) => Ok(a),
            (None, Some(b)) => Ok(b),
            (None, None) => Ok(DEFAULT_DIM),
        }
    }

    pub fn build(&self, dim: Option<usize>) -> Result<ConvexBody, CliError> {
        if let BodySpec::Poly(path) = self {
            return read_poly(path, dim);
        }
        let n = self.dim(dim)?;
        let body = match self {
            BodySpec::Ball => ConvexBody::ball(n),
            BodySpec::Cube => ConvexBody::cube(n),
            BodySpec::Simplex => VPolytope::standard_simplex(n).map(ConvexBody::from),
            BodySpec::Bpn(p) => ConvexBody::bpn(*p, n),
            BodySpec::Ellipsoid(a) => ConvexBody::ellipsoid(a),
            BodySpec::Poly(_) => unreachable!(),
        };
        body.map_err(CliError::Body)
    }

    /// Affine surface area in closed form, where one is known.
    pub fn asa_closed_form(&self, n: usize) -> Option<f64> {
        match self {
            BodySpec::Ball => bpn_asa_closed_form(2.0, n).ok(),
            BodySpec::Bpn(p) => bpn_asa_closed_form(*p, n).ok(),
            BodySpec::Ellipsoid(a) => {
                let t = AffineMap::diagonal(a).ok()?;
                affine_image_asa(bpn_asa_closed_form(2.0, n).ok()?, &t).ok()
            }
            BodySpec::Cube | BodySpec::Simplex | BodySpec::Poly(_) => Some(0.0),
        }
    }

    /// Gauss curvature in closed form at a boundary point of a smooth body.
    pub fn curvature_closed_form(&self, x: &[f64]) -> Option<f64> {
        match self {
            BodySpec::Ball => Some(1.0),
            BodySpec::Bpn(p) => bpn_curvature(*p, x).ok(),
            BodySpec::Ellipsoid(a) => {
                let n = a.len() as f64;
                let prod: f64 = a.iter().map(|v| v * v).product();
                let s: f64 = x.iter().zip(a).map(|(xi, ai)| xi * xi / ai.powi(4)).sum();
                Some(1.0 / (prod * s.powf((n + 1.0) / 2.0)))
            }
            _ => None,
        }
    }
}

impl fmt::Display for BodySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BodySpec::Ball => write!(f, "ball"),
            BodySpec::Cube => write!(f, "cube"),
            BodySpec::Simplex => write!(f, "simplex"),
            BodySpec::Bpn(p) => write!(f, "bpn:{p}"),
            BodySpec::Ellipsoid(a) => {
                let s: Vec<String> = a.iter().map(|v| v.to_string()).collect();
                write!(f, "ellipsoid:{}", s.join(","))
            }
            BodySpec::Poly(p) => write!(f, "poly:@{}", p.display()),
        }
    }
}

fn read_poly(path: &PathBuf, dim: Option<usize>) -> Result<ConvexBody, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
    let file: PolyFile =
        serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.clone(), source })?;
    let file_dim = match &file {
        PolyFile::V { dim, .. } | PolyFile::H { dim, .. } => *dim,
    };
    if let Some(d) = dim.filter(|&d| d != file_dim) {
        return Err(CliError::Usage(format!("polytope file has dimension {file_dim} but --dim is {d}")));
    }
    let check = |len: usize| {
        if len == file_dim {
            Ok(())
        } else {
            Err(CliError::Body(affsurf::Error::DimensionMismatch { expected: file_dim, found: len }))
        }
    };
    match file {
        PolyFile::V { vertices, .. } => {
            for v in &vertices {
                check(v.len())?;
            }
            VPolytope::new(vertices).map(ConvexBody::from).map_err(CliError::Body)
        }
        PolyFile::H { halfspaces, .. } => {
            let mut hs = Vec::with_capacity(halfspaces.len());
            for h in halfspaces {
                check(h.normal.len())?;
                hs.push(Halfspace::new(h.normal, h.offset).map_err(CliError::Body)?);
            }
            HPolytope::new(hs).map(ConvexBody::from).map_err(CliError::Body)
        }
    }
}

/// Parses and constructs a body; `dim` is the value of `--dim`.
pub fn parse_body(spec: &str, dim: Option<usize>) -> Result<ConvexBody, CliError> {
    BodySpec::parse(spec)?.build(dim)
}

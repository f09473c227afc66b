//! Built-in kernel registry and the JSON Taylor-file format.

use std::path::Path;

use finpart::contour::{Decay, Kernel};
use finpart::C64;
use serde::Deserialize;

use crate::UsageError;

/// One built-in kernel family.
#[derive(Debug, Clone, Copy)]
pub struct KernelRegistryEntry {
    pub id: &'static str,
    /// Parameter names in call order, e.g. `sqrt-ratio(a,b)`.
    pub params: &'static [&'static str],
    /// Values used when the id is given without parentheses.
    pub defaults: &'static [f64],
    pub doc: &'static str,
}

pub const REGISTRY: &[KernelRegistryEntry] = &[
    KernelRegistryEntry { id: "const", params: &[], defaults: &[], doc: "k(z) = 1" },
    KernelRegistryEntry { id: "exp", params: &["beta"], defaults: &[1.0], doc: "k(z) = exp(-beta z), beta > 0" },
    KernelRegistryEntry {
        id: "poly",
        params: &["c0", "c1", "..."],
        defaults: &[],
        doc: "k(z) = c0 + c1 z + ... (real coefficients)",
    },
    KernelRegistryEntry {
        id: "sqrt-ratio",
        params: &["a", "b"],
        defaults: &[1.5, 1.0],
        doc: "k(z) = sqrt((a + z)/(b + z)), a, b > 0",
    },
    KernelRegistryEntry {
        id: "j0sq-recip-gamma",
        params: &[],
        defaults: &[],
        doc: "k(z) = J0(z)^2 / Gamma(1 + z), entire",
    },
];

/// Splits `name(x, y, ...)` into the name and its numeric arguments.
pub(crate) fn parse_call(spec: &str) -> Result<(&str, Option<Vec<f64>>), UsageError> {
    let spec = spec.trim();
    let Some(open) = spec.find('(') else {
        return Ok((spec, None));
    };
    let inner =
        spec[open + 1..].strip_suffix(')').ok_or_else(|| UsageError(format!("unbalanced parentheses in `{spec}`")))?;
    let args = inner
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<f64>().map_err(|_| UsageError(format!("bad number `{}` in `{spec}`", s.trim()))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((spec[..open].trim(), Some(args)))
}

fn arity(entry: &KernelRegistryEntry, args: Option<Vec<f64>>) -> Result<Vec<f64>, UsageError> {
    let args = args.unwrap_or_else(|| entry.defaults.to_vec());
    if args.len() != entry.params.len() {
        return Err(UsageError(format!(
            "kernel `{}` takes {} parameter(s) ({}), got {}",
            entry.id,
            entry.params.len(),
            entry.params.join(", "),
            args.len()
        )));
    }
    Ok(args)
}

/// Builds a registry kernel from `id` or `id(params)`.
pub fn registry_kernel(spec: &str) -> Result<Kernel, UsageError> {
    let (name, args) = parse_call(spec)?;
    let entry = REGISTRY.iter().find(|e| e.id == name).ok_or_else(|| UsageError(format!("unknown kernel `{name}`")))?;
    let built = match entry.id {
        "poly" => {
            let c = args.filter(|a| !a.is_empty()).ok_or_else(|| UsageError("poly needs coefficients".into()))?;
            Kernel::polynomial(c.into_iter().map(|x| C64::new(x, 0.0)).collect())
        }
        "const" => Ok(Kernel::constant()),
        "j0sq-recip-gamma" => Ok(Kernel::j0sq_recip_gamma()),
        "exp" => Kernel::exponential(arity(entry, args)?[0]),
        "sqrt-ratio" => {
            let p = arity(entry, args)?;
            Kernel::sqrt_ratio(p[0], p[1])
        }
        _ => unreachable!("registry ids are matched above"),
    };
    built.map_err(|e| UsageError(format!("invalid parameters for `{name}`: {e}")))
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Radius {
    Finite(f64),
    Named(String),
}

#[derive(Debug, Deserialize)]
struct DecaySpec {
    #[serde(rename = "type")]
    kind: String,
    #[serde(default)]
    rate: f64,
}

#[derive(Debug, Deserialize)]
struct TaylorFile {
    coeffs: Vec<[f64; 2]>,
    radius: Radius,
    decay: DecaySpec,
}

/// Parses a Taylor-file kernel. The kernel is evaluated by its truncated
/// series, so only `|z| < radius` is meaningful.
pub fn taylor_kernel(id: &str, json: &str) -> Result<Kernel, UsageError> {
    let f: TaylorFile = serde_json::from_str(json).map_err(|e| UsageError(format!("kernel file `{id}`: {e}")))?;
    let rho0 = match f.radius {
        Radius::Finite(r) => r,
        Radius::Named(s) if s == "inf" => f64::INFINITY,
        Radius::Named(s) => return Err(UsageError(format!("kernel file `{id}`: bad radius `{s}`"))),
    };
    let decay = match f.decay.kind.as_str() {
        "exp" => Decay::Exponential { rate: f.decay.rate },
        "recip-gamma" => Decay::ReciprocalGamma,
        // `rate` is the growth order of |k(t)|
        "poly" => Decay::Algebraic { order: f.decay.rate },
        other => return Err(UsageError(format!("kernel file `{id}`: unknown decay `{other}`"))),
    };
    let coeffs = f.coeffs.iter().map(|[re, im]| C64::new(*re, *im)).collect();
    Kernel::from_taylor(id, coeffs, rho0, decay).map_err(|e| UsageError(format!("kernel file `{id}`: {e}")))
}

/// A kernel from `--kernel`.
#[derive(Debug, Clone)]
pub struct ResolvedKernel {
    pub kernel: Kernel,
    /// Taylor-file kernels exist only inside their disc of convergence.
    pub series_only: bool,
}

impl ResolvedKernel {
    /// Rejects upper limits the kernel cannot be evaluated up to.
    pub fn check_upper(&self, upper: f64) -> Result<(), UsageError> {
        let r = self.kernel.rho0();
        if self.series_only && r.is_finite() && upper >= r {
            return Err(UsageError(format!(
                "kernel file `{}` has radius {r}; the upper limit must be smaller",
                self.kernel.id()
            )));
        }
        Ok(())
    }
}

/// Resolves `--kernel`: a registry id, or else a path to a Taylor file.
pub fn resolve_kernel(spec: &str) -> Result<ResolvedKernel, UsageError> {
    let (name, _) = parse_call(spec)?;
    if REGISTRY.iter().any(|e| e.id == name) {
        return Ok(ResolvedKernel { kernel: registry_kernel(spec)?, series_only: false });
    }
    let path = Path::new(spec);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| UsageError(format!("cannot read `{spec}`: {e}")))?;
        return Ok(ResolvedKernel { kernel: taylor_kernel(spec, &text)?, series_only: true });
    }
    Err(UsageError(format!("unknown kernel `{spec}` (not a registry id or a readable file)")))
}

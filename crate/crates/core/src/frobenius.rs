//! Frobenius data for elliptic curves over Q: naive point counting with a
//! quadratic-residue table, normalized class maps into group models, the
//! symmetric-square lift, CM detection, and CSV ingestion/emission.

use std::f64::consts::PI;
use std::io::{BufRead, Write};
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group_models::{ClassPoint, GroupModel};

/// Short Weierstrass curve y^2 = x^3 + a x + b over Q.
#[derive(Debug, Clone)]
pub struct CurveSpec {
    pub a: i64,
    pub b: i64,
    pub label: String,
}

impl CurveSpec {
    pub fn new(a: i64, b: i64) -> Result<Self> {
        let curve = Self { a, b, label: format!("[{a},{b}]") };
        if curve.discriminant() == 0 {
            return Err(Error::SingularCurve { a, b });
        }
        Ok(curve)
    }

    pub fn discriminant(&self) -> i128 {
        let a = self.a as i128;
        let b = self.b as i128;
        -16 * (4 * a * a * a + 27 * b * b)
    }

    pub fn has_good_reduction(&self, p: u64) -> bool {
        self.discriminant() % p as i128 != 0
    }
}

/// All primes p with 5 <= p <= bound, ascending (2 and 3 are excluded).
pub fn prime_sieve(bound: u64) -> Result<Vec<u64>> {
    if bound < 5 {
        return Err(Error::Contract(format!("prime bound {bound} < 5")));
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for p in 2..=n {
        if !composite[p] {
            if p >= 5 {
                primes.push(p as u64);
            }
            let mut q = p * p;
            while q <= n {
                composite[q] = true;
                q += p;
            }
        }
    }
    Ok(primes)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for d in [2u64, 3, 5, 7] {
        if n % d == 0 {
            return n == d;
        }
    }
    let mut d = 11u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// #E(F_p) including the point at infinity, via a quadratic-residue table:
/// 1 + sum_x (1 + legendre(x^3 + a x + b)).
pub fn count_points(curve: &CurveSpec, p: u64) -> Result<u64> {
    if p < 5 {
        return Err(Error::Contract(format!("p = {p} < 5 is excluded")));
    }
    if !curve.has_good_reduction(p) {
        return Err(Error::BadReduction(p));
    }
    let a = curve.a.rem_euclid(p as i64) as u64;
    let b = curve.b.rem_euclid(p as i64) as u64;
    // qr[v] = legendre(v) in {-1, 0, 1}.
    let mut qr = vec![-1i8; p as usize];
    qr[0] = 0;
    for y in 1..p {
        qr[((y * y) % p) as usize] = 1;
    }
    let mut count: i64 = 1; // point at infinity
    for x in 0..p {
        let fx = ((x * x % p) * x % p + a * x % p + b) % p;
        count += 1 + qr[fx as usize] as i64;
    }
    Ok(count as u64)
}

/// a_p = p + 1 - #E(F_p); the Hasse bound is asserted on the result.
pub fn trace_of_frobenius(curve: &CurveSpec, p: u64) -> Result<i64> {
    let count = count_points(curve, p)?;
    let ap = p as i64 + 1 - count as i64;
    if (ap as i128) * (ap as i128) > 4 * p as i128 {
        return Err(Error::HasseViolation { p, ap });
    }
    Ok(ap)
}

/// Traces for all good primes 5 <= p <= bound, in ascending prime order,
/// plus the list of skipped bad-reduction primes. Counting is parallel over
/// primes; the output order is fixed by the sieve.
pub fn generate_traces(curve: &CurveSpec, bound: u64) -> Result<(Vec<(u64, i64)>, Vec<u64>)> {
    let primes = prime_sieve(bound)?;
    let results: Vec<(u64, Result<i64>)> = primes
        .par_iter()
        .map(|&p| (p, trace_of_frobenius(curve, p)))
        .collect();
    let mut traces = Vec::with_capacity(results.len());
    let mut skipped = Vec::new();
    for (p, r) in results {
        match r {
            Ok(ap) => traces.push((p, ap)),
            Err(Error::BadReduction(_)) => skipped.push(p),
            Err(e) => return Err(e),
        }
    }
    Ok((traces, skipped))
}

/// One normalized Frobenius sample mapped into a group model.
#[derive(Debug, Clone)]
pub struct FrobeniusSample {
    pub p: u64,
    pub ap: i64,
    pub weight: u32,
    pub class_point: ClassPoint,
    pub component: String,
}

/// The normalized Frobenius class of (a_p, p) in a weight-1 model.
/// SU2: theta = arccos(a_p / 2 sqrt p). N_U1: supersingular samples land on
/// the reflection component, ordinary ones on the identity component.
pub fn normalized_class(ap: i64, p: u64, model: &GroupModel) -> Result<ClassPoint> {
    if (ap as i128) * (ap as i128) > 4 * p as i128 {
        return Err(Error::HasseViolation { p, ap });
    }
    let cosv = (ap as f64 / (2.0 * (p as f64).sqrt())).clamp(-1.0, 1.0);
    let theta = cosv.acos();
    match model.name.as_str() {
        "SU2" => Ok(ClassPoint::new("id", vec![theta])),
        "N_U1" => {
            if ap == 0 {
                Ok(ClassPoint::new("refl", vec![]))
            } else {
                Ok(ClassPoint::new("id", vec![theta]))
            }
        }
        other => Err(Error::Contract(format!(
            "normalized_class supports weight-1 models SU2 and N_U1, not `{other}`"
        ))),
    }
}

/// Symmetric-square lift: the SU(2) class with angle theta maps to the class
/// with eigenvalues {e^{2i theta}, 1, e^{-2i theta}}, always on the identity
/// (tilde) component of the target.
pub fn symmetric_square_class(x: &ClassPoint, target: &GroupModel) -> Result<ClassPoint> {
    match target.name.as_str() {
        "SO3" | "O3_CANDIDATE" => {}
        other => {
            return Err(Error::Contract(format!(
                "symmetric square targets SO3 or O3_CANDIDATE, not `{other}`"
            )))
        }
    }
    let theta = x.angles[0];
    if !(0.0..=PI + 1e-12).contains(&theta) {
        return Err(Error::Domain(format!("angle {theta} outside [0, pi]")));
    }
    let folded = theta.min(PI - theta).max(0.0);
    Ok(ClassPoint::new("id", vec![folded]))
}

/// CM heuristic: the proportion of supersingular samples (a_p = 0) exceeds
/// the threshold (CM curves approach 1/2, non-CM curves approach 0).
pub fn cm_detect(traces: &[(u64, i64)], threshold: f64) -> Result<bool> {
    if traces.len() < 500 {
        return Err(Error::TooFewSamples { got: traces.len(), need: 500 });
    }
    let zero = traces.iter().filter(|&&(_, ap)| ap == 0).count();
    Ok(zero as f64 / traces.len() as f64 > threshold)
}

/// Builds model samples from raw (p, a_p) traces. With `sym2` set, the trace
/// is first normalized into SU(2) and then lifted by the symmetric square.
pub fn samples_for_model(
    traces: &[(u64, i64)],
    model: &Arc<GroupModel>,
    sym2: bool,
) -> Result<Vec<FrobeniusSample>> {
    let su2 = if sym2 {
        Some(crate::group_models::builtin_model("SU2")?)
    } else {
        None
    };
    traces
        .iter()
        .map(|&(p, ap)| {
            let class_point = if let Some(su2) = &su2 {
                let base = normalized_class(ap, p, su2)?;
                symmetric_square_class(&base, model)?
            } else {
                normalized_class(ap, p, model)?
            };
            model.validate_point(&class_point)?;
            Ok(FrobeniusSample {
                p,
                ap,
                weight: model.weight,
                component: class_point.component.clone(),
                class_point,
            })
        })
        .collect()
}

/// Reads the `p,ap` CSV format: a header row, integer rows, `#` comments.
/// Rows are validated (primality, p >= 5, Hasse bound) with line numbers.
pub fn read_csv<R: BufRead>(reader: R, negate_ap: bool) -> Result<Vec<(u64, i64)>> {
    let mut traces = Vec::new();
    let mut header_seen = false;
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if !header_seen {
            if trimmed != "p,ap" {
                return Err(Error::Csv {
                    line: line_no,
                    msg: format!("expected header `p,ap`, got `{trimmed}`"),
                });
            }
            header_seen = true;
            continue;
        }
        let mut parts = trimmed.split(',');
        let (ps, aps) = match (parts.next(), parts.next(), parts.next()) {
            (Some(p), Some(a), None) => (p.trim(), a.trim()),
            _ => {
                return Err(Error::Csv {
                    line: line_no,
                    msg: "expected exactly two comma-separated fields".into(),
                })
            }
        };
        let p: u64 = ps.parse().map_err(|_| Error::Csv {
            line: line_no,
            msg: format!("bad prime `{ps}`"),
        })?;
        let mut ap: i64 = aps.parse().map_err(|_| Error::Csv {
            line: line_no,
            msg: format!("bad trace `{aps}`"),
        })?;
        if negate_ap {
            ap = -ap;
        }
        if p < 5 || !is_prime(p) {
            return Err(Error::Csv {
                line: line_no,
                msg: format!("{p} is not a prime >= 5"),
            });
        }
        if (ap as i128) * (ap as i128) > 4 * p as i128 {
            return Err(Error::Csv {
                line: line_no,
                msg: format!("Hasse bound violated: a_p = {ap} at p = {p}"),
            });
        }
        traces.push((p, ap));
    }
    if !header_seen {
        return Err(Error::Csv { line: 1, msg: "missing `p,ap` header".into() });
    }
    Ok(traces)
}

pub fn write_csv<W: Write>(mut writer: W, traces: &[(u64, i64)]) -> Result<()> {
    writeln!(writer, "p,ap")?;
    for &(p, ap) in traces {
        writeln!(writer, "{p},{ap}")?;
    }
    Ok(())
}

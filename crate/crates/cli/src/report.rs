//! Report assembly and rendering (plain-text table and versioned JSON).

use std::fmt::Write as _;
use std::time::Duration;

use serde_json::{json, Value};
use signaling_core::benchmarks::{BenchmarkReport, PureSchemeResult};
use signaling_core::model::{signal_bids, signal_revenue, top_two, PsiMatrix, SignalingScheme};
use signaling_core::optimizer::Method;
use signaling_core::rational::{fmt_decimal, fmt_exact, to_f64};
use signaling_core::Rational;

pub const SCHEMA_VERSION: u32 = 1;

/// `p/q (d.dddddd)`
pub fn render(value: &Rational) -> String {
    format!("{} ({})", fmt_exact(value), fmt_decimal(value, 6))
}

fn rational_json(value: &Rational) -> Value {
    json!({ "exact": fmt_exact(value), "decimal": to_f64(value) })
}

pub struct Benchmarks {
    pub report: BenchmarkReport,
    pub upper_bound: Rational,
}

pub struct Certificate {
    pub revenue: Rational,
    pub scheme: SignalingScheme,
}

pub struct Gap {
    pub k: i64,
    pub ratio: Rational,
}

pub struct RunReport {
    pub command: &'static str,
    pub psi: PsiMatrix,
    pub method: Option<Method>,
    pub revenue: Option<Rational>,
    pub scheme: Option<SignalingScheme>,
    pub benchmarks: Option<Benchmarks>,
    pub certificate: Option<Certificate>,
    pub pure: Option<PureSchemeResult>,
    pub gap: Option<Gap>,
    pub duration: Duration,
}

impl RunReport {
    pub fn new(command: &'static str, psi: PsiMatrix) -> Self {
        RunReport {
            command,
            psi,
            method: None,
            revenue: None,
            scheme: None,
            benchmarks: None,
            certificate: None,
            pure: None,
            gap: None,
            duration: Duration::ZERO,
        }
    }

    fn scheme_json(&self, scheme: &SignalingScheme) -> Value {
        let signals = scheme
            .signals()
            .iter()
            .map(|signal| {
                let bids = signal_bids(&self.psi, signal);
                let (first, second) = top_two(&bids);
                let masses: Vec<Value> = signal
                    .masses()
                    .iter()
                    .map(|(ty, mass)| json!({ "type": ty, "mass": rational_json(mass) }))
                    .collect();
                json!({
                    "support": signal.support().collect::<Vec<_>>(),
                    "masses": masses,
                    "first": first,
                    "second": second,
                    "topBid": rational_json(&bids[first]),
                    "revenue": rational_json(&signal_revenue(&self.psi, signal)),
                })
            })
            .collect();
        Value::Array(signals)
    }

    pub fn to_json(&self) -> Value {
        let mut out = json!({
            "schemaVersion": SCHEMA_VERSION,
            "command": self.command,
            "instance": { "n": self.psi.n(), "m": self.psi.m() },
        });
        let obj = out.as_object_mut().expect("object literal");
        if let Some(method) = self.method {
            obj.insert("method".into(), json!(method.name()));
        }
        if let Some(revenue) = &self.revenue {
            obj.insert("revenue".into(), rational_json(revenue));
        }
        if let Some(scheme) = &self.scheme {
            obj.insert("scheme".into(), self.scheme_json(scheme));
        }
        if let Some(b) = &self.benchmarks {
            obj.insert(
                "benchmarks".into(),
                json!({
                    "B": rational_json(&b.report.b),
                    "i0": b.report.i0,
                    "Btilde": rational_json(&b.report.b_tilde),
                    "iStar": b.report.i_star,
                    "upperBound": rational_json(&b.upper_bound),
                }),
            );
        }
        if let Some(c) = &self.certificate {
            obj.insert(
                "certificate".into(),
                json!({ "revenue": rational_json(&c.revenue), "scheme": self.scheme_json(&c.scheme) }),
            );
        }
        if let Some(p) = &self.pure {
            obj.insert(
                "pure".into(),
                json!({ "revenue": rational_json(&p.revenue), "partition": p.partition }),
            );
        }
        if let Some(g) = &self.gap {
            obj.insert("gap".into(), json!({ "k": g.k, "ratio": rational_json(&g.ratio) }));
        }
        obj.insert("durationMs".into(), json!(self.duration.as_secs_f64() * 1e3));
        out
    }

    fn scheme_table(&self, out: &mut String, scheme: &SignalingScheme) {
        for (k, signal) in scheme.signals().iter().enumerate() {
            let bids = signal_bids(&self.psi, signal);
            let (first, second) = top_two(&bids);
            let masses: Vec<String> = signal
                .masses()
                .iter()
                .map(|(ty, mass)| format!("{ty}: {}", fmt_exact(mass)))
                .collect();
            let second = second.map_or_else(|| "-".to_string(), |s| s.to_string());
            let _ = writeln!(
                out,
                "  [{k}] {{{}}}  winners {first}, {second}  top bid {}  revenue {}",
                masses.join(", "),
                render(&bids[first]),
                render(&signal_revenue(&self.psi, signal)),
            );
        }
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "instance: n = {}, m = {}", self.psi.n(), self.psi.m());
        if let Some(method) = self.method {
            let _ = writeln!(out, "method: {method}");
        }
        if let Some(revenue) = &self.revenue {
            let label = if self.gap.is_some() { "mixed revenue" } else { "revenue" };
            let _ = writeln!(out, "{label}: {}", render(revenue));
        }
        if let Some(scheme) = &self.scheme {
            let _ = writeln!(out, "scheme ({} signals):", scheme.len());
            self.scheme_table(&mut out, scheme);
        }
        if let Some(b) = &self.benchmarks {
            let _ = writeln!(out, "B = {} (omitted bidder i0 = {})", render(&b.report.b), b.report.i0);
            let _ = writeln!(
                out,
                "Btilde = {} (omitted bidder iStar = {})",
                render(&b.report.b_tilde),
                b.report.i_star
            );
            let _ = writeln!(out, "upper bound = {}", render(&b.upper_bound));
        }
        if let Some(c) = &self.certificate {
            let _ = writeln!(out, "certificate revenue: {}", render(&c.revenue));
            self.scheme_table(&mut out, &c.scheme);
        }
        if let Some(p) = &self.pure {
            let _ = writeln!(out, "pure revenue: {}", render(&p.revenue));
            let parts: Vec<String> = p
                .partition
                .iter()
                .map(|part| {
                    let items: Vec<String> = part.iter().map(|j| j.to_string()).collect();
                    format!("{{{}}}", items.join(", "))
                })
                .collect();
            let _ = writeln!(out, "partition: {}", parts.join(" "));
        }
        if let Some(g) = &self.gap {
            let _ = writeln!(out, "k = {}, mixed / pure = {}", g.k, fmt_exact(&g.ratio));
        }
        let _ = writeln!(out, "time: {:.3} ms", self.duration.as_secs_f64() * 1e3);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use signaling_core::rational::{int, ratio};

    #[test]
    fn renders_exact_then_decimal() {
        assert_eq!(render(&ratio(1, 2)), "1/2 (0.500000)");
        assert_eq!(render(&int(2)), "2/1 (2.000000)");
        assert_eq!(render(&ratio(-2, 3)), "-2/3 (-0.666667)");
    }

    #[test]
    fn json_has_schema_version_and_omits_empty_sections() {
        let psi = PsiMatrix::from_integers(&[[1, 0], [0, 1]]).unwrap();
        let mut report = RunReport::new("pure", psi);
        report.revenue = Some(ratio(1, 3));
        let value = report.to_json();
        assert_eq!(value["schemaVersion"], 1);
        assert_eq!(value["revenue"]["exact"], "1/3");
        assert!(value.get("scheme").is_none());
        assert!(value.get("benchmarks").is_none());
    }
}

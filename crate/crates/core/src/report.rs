//! JSON and text renderings of a strength computation, and comparison of
//! two saved reports.

use serde::{Deserialize, Serialize};

use crate::coeff::{parse_polynomial, UniPoly};
use crate::dimpoly::{compare_strength, render_binomial, Strength};
use crate::operator::SystemKind;
use crate::pipeline::StrengthReport;
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub system: SystemSection,
    pub scheme: Option<SchemeSection>,
    pub groebner: GroebnerSection,
    pub polynomial: PolynomialSection,
    pub validation: ValidationSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemSection {
    pub name: String,
    pub kind: SystemKind,
    pub operators: Vec<String>,
    pub unknowns: Vec<String>,
    pub parameter: Option<String>,
    pub relations: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeSection {
    pub name: String,
    pub rules: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroebnerSection {
    pub size: String,
    pub pairs: String,
    pub pairs_skipped: String,
    pub reductions: String,
    pub ring_operators: Vec<String>,
    pub leading_terms: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialSection {
    pub standard: String,
    pub binomial: String,
    /// `-1` for the zero polynomial.
    pub degree: String,
    pub delta_type: String,
    pub typical_dimension: String,
    pub delta_dimension: String,
    pub validity_threshold: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationSection {
    pub checked_range: [String; 2],
    pub ok: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mismatch: Option<String>,
}

fn degree_string(d: Option<usize>) -> String {
    d.map_or_else(|| "-1".to_string(), |d| d.to_string())
}

impl ReportDocument {
    pub fn from_report(r: &StrengthReport, with_trace: bool) -> Self {
        let p = &r.presentation;
        let ring = &r.ring;
        let v = &r.validation;
        let trace = with_trace.then(|| {
            r.basis
                .trace
                .iter()
                .map(|t| t.render(&ring.order, &ring.operator_names, &ring.generator_names))
                .collect()
        });
        ReportDocument {
            system: SystemSection {
                name: r.name.clone(),
                kind: p.kind,
                operators: p.operator_names.clone(),
                unknowns: p.generator_names.clone(),
                parameter: p.parameter.clone(),
                relations: p.relations.iter().map(|x| x.render(&p.operator_names, &p.generator_names)).collect(),
            },
            scheme: r.scheme.as_ref().map(|s| SchemeSection {
                name: s.name.clone(),
                rules: s.spec.describe(&p.operator_names),
            }),
            groebner: GroebnerSection {
                size: r.basis.len().to_string(),
                pairs: r.basis.stats.pairs_processed.to_string(),
                pairs_skipped: r.basis.stats.pairs_skipped.to_string(),
                reductions: r.basis.stats.reductions.to_string(),
                ring_operators: ring.operator_names.clone(),
                leading_terms: r
                    .basis
                    .leading_terms()
                    .iter()
                    .map(|t| t.render(&ring.operator_names, &ring.generator_names))
                    .collect(),
            },
            polynomial: PolynomialSection {
                standard: r.polynomial.polynomial.render("t"),
                binomial: render_binomial(&r.binomial),
                degree: degree_string(r.invariants.degree),
                delta_type: degree_string(r.invariants.delta_type),
                typical_dimension: r.invariants.typical_dimension.to_string(),
                delta_dimension: r.invariants.delta_dimension.to_string(),
                validity_threshold: r.polynomial.validity_threshold.to_string(),
            },
            validation: ValidationSection {
                checked_range: [v.checked_range.0.to_string(), v.checked_range.1.to_string()],
                ok: v.ok,
                mismatch: v.first_mismatch.as_ref().map(|m| {
                    format!("r={}: oracle {} but polynomial {}", m.r, m.oracle, m.polynomial)
                }).or_else(|| (!v.ok).then(|| format!("interpolated counts give {}", v.interpolated.render("t")))),
            },
            trace,
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))
    }

    pub fn polynomial(&self) -> Result<UniPoly, Error> {
        parse_polynomial(&self.polynomial.standard, "t").map_err(Error::Parse)
    }

    /// `psi` for difference systems, `phi` for differential ones.
    pub fn function_name(&self) -> &'static str {
        match self.system.kind {
            SystemKind::Differential => "phi",
            SystemKind::Difference | SystemKind::Inversive => "psi",
        }
    }

    /// Scheme name for discretized systems, otherwise the system name.
    pub fn label(&self) -> String {
        match &self.scheme {
            Some(s) => s.name.clone(),
            None => self.system.name.clone(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let s = &self.system;
        out.push_str(&format!(
            "system: {} ({}, {} operators, {} unknowns, {} relations)\n",
            s.name,
            s.kind,
            s.operators.len(),
            s.unknowns.len(),
            s.relations.len()
        ));
        if let Some(sc) = &self.scheme {
            out.push_str(&format!("scheme: {} ({})\n", sc.name, sc.rules));
        }
        if let Some(trace) = &self.trace {
            for line in trace {
                out.push_str(&format!("trace: {line}\n"));
            }
        }
        let g = &self.groebner;
        out.push_str(&format!(
            "groebner basis: {} elements, {} pairs processed, {} reductions\n",
            g.size, g.pairs, g.reductions
        ));
        out.push_str(&format!("leading terms: {}\n", g.leading_terms.join(", ")));
        let p = &self.polynomial;
        out.push_str(&format!("binomial form: {}\n", p.binomial));
        out.push_str(&format!(
            "degree: {}  type: {}  typical dimension: {}  dimension: {}\n",
            p.degree, p.delta_type, p.typical_dimension, p.delta_dimension
        ));
        let v = &self.validation;
        let status = if v.ok { "ok".to_string() } else { format!("FAILED ({})", v.mismatch.clone().unwrap_or_default()) };
        out.push_str(&format!(
            "validity threshold: {}  oracle check r in [{}, {}]: {}\n",
            p.validity_threshold, v.checked_range[0], v.checked_range[1], status
        ));
        out.push_str(&format!("{}(t) = {}\n", self.function_name(), p.standard));
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub strength: Strength,
    pub first: String,
    pub second: String,
}

impl Verdict {
    pub fn message(&self) -> String {
        match self.strength {
            Strength::Stronger => format!("{} is stronger", self.first),
            Strength::Weaker => format!("{} is stronger", self.second),
            Strength::Equal => format!("{} and {} have equal strength", self.first, self.second),
        }
    }
}

/// Strength of `a` relative to `b`, labelled by scheme or system name.
pub fn compare_systems(a: &ReportDocument, b: &ReportDocument) -> Result<Verdict, Error> {
    let strength = compare_strength(&a.polynomial()?, &b.polynomial()?);
    let (mut first, mut second) = (a.label(), b.label());
    if first == second {
        first.push_str(" (first)");
        second.push_str(" (second)");
    }
    Ok(Verdict { strength, first, second })
}

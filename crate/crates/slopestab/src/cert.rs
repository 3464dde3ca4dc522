//! Self-contained, re-checkable certificates: inputs, exact quantities,
//! verdicts, and the fixed implication chain of conclusion labels.
//!
//! A certificate is valid exactly when re-deriving every quantity from its
//! inputs reproduces the stored values bit for bit.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{Rational, Surd};
use crate::family::{CurveFamily, FamilyError};
use crate::jflow::{correction_search, Correction, JFlowError};
use crate::slope::{destabilizes, mu_c, mu_variety, Decision, Verdict};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CertError {
    #[error("certificate field {0} does not match recomputation")]
    Mismatch(String),
    #[error("certificate schema violation: {0}")]
    Schema(String),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    JFlow(#[from] JFlowError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Inputs {
    pub g: u64,
    pub d: u64,
    pub t: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Quantities {
    pub s_c: Rational,
    pub l2: Rational,
    pub kl: Rational,
    pub lz: Rational,
    pub kz: Rational,
    pub z2: Rational,
    /// mu(X, L_t)
    pub mu: Rational,
    /// mu_1(O_Z, L_t), the c = 1 subscheme slope
    pub mu_1: Rational,
    /// limit slope mu(X, L_{s_C})
    pub mu_limit: Rational,
    /// limit slope mu_1(O_Z, L_{s_C})
    pub mu_1_limit: Rational,
    pub q: Rational,
    pub epsilon_lo: Rational,
    pub epsilon_hi: Surd,
    pub t_star: Surd,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JFlowVerdict {
    pub ample: bool,
    pub corrections: Vec<Correction>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Verdicts {
    pub slope: Decision,
    pub jflow: JFlowVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub schema_version: u32,
    pub inputs: Inputs,
    pub quantities: Quantities,
    pub verdicts: Verdicts,
    pub conclusions: Vec<String>,
    pub notes: Vec<String>,
    pub provenance: Vec<(String, String)>,
}

/// The fixed implication chain attached to a slope-unstable verdict.
fn conclusions_for(slope: &Decision) -> Vec<String> {
    match slope.verdict {
        Verdict::Unstable => vec![
            "not K-semistable".to_string(),
            "neither asymptotically Hilbert nor asymptotically Chow semistable".to_string(),
            "no cscK metric in c1(L_t)".to_string(),
        ],
        Verdict::NoWitnessFound => Vec::new(),
    }
}

fn notes() -> Vec<String> {
    vec![
        "existence of curves with the required simple branched covers follows from the \
         Riemann existence theorem and is documented, not constructed"
            .to_string(),
        "whether the Mabuchi functional is bounded exactly when t exceeds t_star is an \
         open question; recorded as a conjecture, never asserted"
            .to_string(),
    ]
}

fn provenance() -> Vec<(String, String)> {
    [
        ("s_c", "s_C = g/(d-1)"),
        ("l2", "L_t^2 = 2t^2 - 2g"),
        ("kl", "K.L_t = 2t(2g-2)"),
        ("lz", "L_t.Z = 2t(d-1) - 2g"),
        ("kz", "K.Z = 2(2g-2)(d-1)"),
        ("z2", "Z^2 = 2(d-1)^2 - 2g"),
        ("mu", "mu(X,L) = -K.L/L^2"),
        ("mu_1", "mu_c(O_Z,L) = 3(2L.Z - c(K.Z + Z^2))/(2c(3L.Z - cZ^2)) at c = 1"),
        ("mu_limit", "mu(X,L_{s_C}) = -(2g-2)(d-1)/(g-(d-1)^2)"),
        (
            "mu_1_limit",
            "mu_1(O_Z,L_{s_C}) = 3(g-(2g-2)(d-1)-(d-1)^2)/(2(g-(d-1)^2))",
        ),
        ("q", "Q = 3g - (2g-2)(d-1) - 3(d-1)^2"),
        ("epsilon_lo", "L_t - Z = (t-(d-1))f is ample"),
        (
            "epsilon_hi",
            "min of nef thresholds against Z, Delta, f and the self-intersection",
        ),
        ("t_star", "t* = s_C + sqrt(s_C^2 - g)"),
        ("verdicts.slope", "exact sign analysis of mu_c - mu over (0, epsilon_lo]"),
        ("verdicts.jflow", "alpha = 2(K.L)L - (L^2)K ample iff t^2 + g > 2 t s_C"),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v.to_string()))
    .collect()
}

/// Build the full certificate for the polarization L_t on the family.
pub fn build_certificate(fam: &CurveFamily, t: &Rational) -> Result<Certificate, FamilyError> {
    let data = fam.slope_data(t)?;
    let seshadri = fam.seshadri_interval(t)?;
    let slope_decision = destabilizes(&data, &seshadri.lo)?;
    let (mu_limit, mu_1_limit) = fam.limit_slopes();
    let jflow_report = correction_search(fam, t, true, 1_000_000).map_err(|e| match e {
        JFlowError::Family(f) => f,
        JFlowError::NoCorrectionFound(_) => {
            unreachable!("single-curve correction always exists in the decidable cone")
        }
    })?;
    let quantities = Quantities {
        s_c: fam.s_c().clone(),
        l2: data.l2().clone(),
        kl: data.kl().clone(),
        lz: data.lz().clone(),
        kz: data.kz().clone(),
        z2: data.z2().clone(),
        mu: mu_variety(&data),
        mu_1: mu_c(&data, &Rational::one())?,
        mu_limit,
        mu_1_limit,
        q: fam.q_value(),
        epsilon_lo: seshadri.lo,
        epsilon_hi: seshadri.hi,
        t_star: crate::jflow::t_star(fam),
    };
    let conclusions = conclusions_for(&slope_decision);
    Ok(Certificate {
        schema_version: SCHEMA_VERSION,
        inputs: Inputs {
            g: fam.genus().value(),
            d: fam.degree(),
            t: t.clone(),
        },
        quantities,
        verdicts: Verdicts {
            slope: slope_decision,
            jflow: JFlowVerdict {
                ample: jflow_report.ample,
                corrections: jflow_report.corrections,
            },
        },
        conclusions,
        notes: notes(),
        provenance: provenance(),
    })
}

macro_rules! check_field {
    ($path:expr, $stored:expr, $fresh:expr) => {
        if $stored != $fresh {
            return Err(CertError::Mismatch($path.to_string()));
        }
    };
}

/// Recompute every quantity and verdict from the certificate's inputs and
/// compare bit-exactly; the first differing field is reported.
pub fn verify_certificate(cert: &Certificate) -> Result<(), CertError> {
    if cert.schema_version != SCHEMA_VERSION {
        return Err(CertError::Schema(format!(
            "unsupported schema_version {}, expected {}",
            cert.schema_version, SCHEMA_VERSION
        )));
    }
    let fam = CurveFamily::new(cert.inputs.g, cert.inputs.d)?;
    let fresh = build_certificate(&fam, &cert.inputs.t)?;

    check_field!("quantities.s_c", cert.quantities.s_c, fresh.quantities.s_c);
    check_field!("quantities.l2", cert.quantities.l2, fresh.quantities.l2);
    check_field!("quantities.kl", cert.quantities.kl, fresh.quantities.kl);
    check_field!("quantities.lz", cert.quantities.lz, fresh.quantities.lz);
    check_field!("quantities.kz", cert.quantities.kz, fresh.quantities.kz);
    check_field!("quantities.z2", cert.quantities.z2, fresh.quantities.z2);
    check_field!("quantities.mu", cert.quantities.mu, fresh.quantities.mu);
    check_field!("quantities.mu_1", cert.quantities.mu_1, fresh.quantities.mu_1);
    check_field!(
        "quantities.mu_limit",
        cert.quantities.mu_limit,
        fresh.quantities.mu_limit
    );
    check_field!(
        "quantities.mu_1_limit",
        cert.quantities.mu_1_limit,
        fresh.quantities.mu_1_limit
    );
    check_field!("quantities.q", cert.quantities.q, fresh.quantities.q);
    check_field!(
        "quantities.epsilon_lo",
        cert.quantities.epsilon_lo,
        fresh.quantities.epsilon_lo
    );
    check_field!(
        "quantities.epsilon_hi",
        cert.quantities.epsilon_hi,
        fresh.quantities.epsilon_hi
    );
    check_field!(
        "quantities.t_star",
        cert.quantities.t_star,
        fresh.quantities.t_star
    );
    check_field!(
        "verdicts.slope.verdict",
        cert.verdicts.slope.verdict,
        fresh.verdicts.slope.verdict
    );
    check_field!(
        "verdicts.slope.witness_c",
        cert.verdicts.slope.witness_c,
        fresh.verdicts.slope.witness_c
    );
    check_field!(
        "verdicts.slope.mu_at_witness",
        cert.verdicts.slope.mu_at_witness,
        fresh.verdicts.slope.mu_at_witness
    );
    check_field!(
        "verdicts.jflow.ample",
        cert.verdicts.jflow.ample,
        fresh.verdicts.jflow.ample
    );
    check_field!(
        "verdicts.jflow.corrections",
        cert.verdicts.jflow.corrections,
        fresh.verdicts.jflow.corrections
    );
    check_field!("conclusions", cert.conclusions, fresh.conclusions);
    check_field!("notes", cert.notes, fresh.notes);
    check_field!("provenance", cert.provenance, fresh.provenance);
    Ok(())
}

/// Parse a certificate from JSON; structural problems are schema errors.
pub fn parse_certificate(json: &str) -> Result<Certificate, CertError> {
    serde_json::from_str(json).map_err(|e| CertError::Schema(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn analyze_certificate_for_remark_surface() {
        let fam = CurveFamily::new(5, 3).unwrap();
        let cert = build_certificate(&fam, &rat(3, 1)).unwrap();
        assert_eq!(cert.quantities.mu, rat(-6, 1));
        assert_eq!(cert.quantities.mu_1, rat(-39, 8));
        assert_eq!(cert.quantities.mu_limit, rat(-16, 1));
        assert_eq!(cert.quantities.mu_1_limit, rat(-45, 2));
        assert_eq!(cert.quantities.q, rat(-13, 1));
        assert_eq!(cert.verdicts.slope.verdict, Verdict::NoWitnessFound);
        assert!(!cert.verdicts.jflow.ample);
        assert_eq!(cert.verdicts.jflow.corrections.len(), 1);
        assert_eq!(cert.verdicts.jflow.corrections[0].coefficient, rat(33, 1));
        assert!(cert.conclusions.is_empty());
    }

    #[test]
    fn round_trip_verifies() {
        let fam = CurveFamily::new(5, 3).unwrap();
        let cert = build_certificate(&fam, &rat(13, 5)).unwrap();
        assert_eq!(cert.verdicts.slope.verdict, Verdict::Unstable);
        assert_eq!(cert.conclusions.len(), 3);
        let json = serde_json::to_string_pretty(&cert).unwrap();
        let parsed = parse_certificate(&json).unwrap();
        verify_certificate(&parsed).unwrap();
    }

    #[test]
    fn tampering_is_detected_with_field_name() {
        let fam = CurveFamily::new(5, 3).unwrap();
        let mut cert = build_certificate(&fam, &rat(3, 1)).unwrap();
        cert.quantities.mu = rat(-5, 1);
        match verify_certificate(&cert) {
            Err(CertError::Mismatch(field)) => assert_eq!(field, "quantities.mu"),
            other => panic!("expected mismatch, got {other:?}"),
        }
    }

    #[test]
    fn stale_schema_version_is_a_schema_error() {
        let fam = CurveFamily::new(5, 3).unwrap();
        let mut cert = build_certificate(&fam, &rat(3, 1)).unwrap();
        cert.schema_version = 0;
        assert!(matches!(
            verify_certificate(&cert),
            Err(CertError::Schema(_))
        ));
    }

    #[test]
    fn unknown_fields_are_schema_errors() {
        let fam = CurveFamily::new(5, 3).unwrap();
        let cert = build_certificate(&fam, &rat(3, 1)).unwrap();
        let mut value: serde_json::Value =
            serde_json::from_str(&serde_json::to_string(&cert).unwrap()).unwrap();
        value["quantities"]["bogus"] = serde_json::json!("1/1");
        let json = serde_json::to_string(&value).unwrap();
        assert!(matches!(parse_certificate(&json), Err(CertError::Schema(_))));
    }
}

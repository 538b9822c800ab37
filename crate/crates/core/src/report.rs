//! The full analysis of a specification, as a serializable report.

use std::fmt::{self, Write as _};

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::arch::{arch_abscissa, assemble, check_domination};
use crate::error::{Error, Result};
use crate::matroid::{b_infinity, LinearMatroid};
use crate::orbit::{GTilde, GTildeMode, OrbitAnalysis};
use crate::rational;
use crate::schema::LoadedSpec;
use crate::torus::AbscissaVariant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Finite,
    Infinite,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratumReport {
    pub a: usize,
    pub b: u64,
    pub subsets: Vec<Vec<u64>>,
    pub orbits: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Abscissae {
    pub ramified: String,
    pub archimedean: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArchReport {
    pub arch_abscissa: String,
    pub b_infinity_m_prime: String,
    pub dominated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisReport {
    pub faithful: bool,
    pub verdict: Verdict,
    pub lambda: u64,
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    #[serde(rename = "A_witness", default, skip_serializing_if = "Option::is_none")]
    pub a_witness: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gtilde_mode: Option<GTildeMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gtilde_order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_tilde0_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit_count: Option<usize>,
    #[serde(rename = "deg_P", default, skip_serializing_if = "Option::is_none")]
    pub deg_p: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strata: Option<Vec<StratumReport>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abscissae: Option<Abscissae>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub archimedean: Option<ArchReport>,
}

/// Runs every torus-level analysis on a loaded specification. A
/// non-faithful representation yields the `infinite` verdict and no
/// further invariants.
pub fn analyze(spec: &LoadedSpec) -> Result<AnalysisReport> {
    let t = &spec.torus;
    let lambda_big = t.lambda();
    let lambda = lambda_big.to_u64().ok_or_else(|| Error::TooLarge(format!("lambda = {lambda_big}")))?;
    if !t.is_faithful() {
        return Ok(AnalysisReport {
            faithful: false,
            verdict: Verdict::Infinite,
            lambda,
            a: None,
            a_witness: None,
            sigma_size: None,
            gtilde_mode: None,
            gtilde_order: None,
            sigma_tilde0_size: None,
            orbit_count: None,
            deg_p: None,
            strata: None,
            abscissae: None,
            archimedean: None,
        });
    }
    let (a, witness) = t.invariant_a()?;
    let sigma = t.sigma_set()?;
    let gtilde = GTilde::build(t, &lambda_big, spec.gtilde_generators())?;
    let gtilde_mode = gtilde.mode();
    let gtilde_order = gtilde.order();
    let orbits = OrbitAnalysis::new(t, gtilde)?;
    let orbit_count = orbits.orbit_count()?;
    if orbits.burnside_count()? != orbit_count {
        return Err(Error::Internal("orbit enumeration disagrees with Burnside count".into()));
    }
    let per_stratum = orbits.stratum_orbits()?;
    let strata = t
        .strata()?
        .into_iter()
        .map(|((a, b), subsets)| StratumReport {
            a,
            b,
            subsets: subsets.into_iter().map(|s| s.counts).collect(),
            orbits: per_stratum.get(&(a, b)).copied().unwrap_or(0),
        })
        .collect();
    let archimedean = spec.archimedean.as_ref().map(arch_report).transpose()?;
    Ok(AnalysisReport {
        faithful: true,
        verdict: Verdict::Finite,
        lambda,
        a: Some(rational::format(&a)),
        a_witness: Some(witness.counts),
        sigma_size: Some(sigma.len()),
        gtilde_mode: Some(gtilde_mode),
        gtilde_order: Some(gtilde_order),
        sigma_tilde0_size: Some(orbits.sigma_tilde0().len()),
        orbit_count: Some(orbit_count),
        deg_p: Some(orbit_count - 1),
        strata: Some(strata),
        abscissae: Some(Abscissae {
            ramified: rational::format(&t.abscissa(AbscissaVariant::Ramified)?),
            archimedean: rational::format(&t.abscissa(AbscissaVariant::Archimedean)?),
        }),
        archimedean,
    })
}

fn arch_report(blocks: &crate::arch::ArchBlocks) -> Result<ArchReport> {
    let mats = assemble(blocks)?;
    let b = b_infinity(&LinearMatroid::from_int(&mats.m_prime)?)?.0;
    Ok(ArchReport {
        arch_abscissa: rational::format(&arch_abscissa(&mats)?),
        b_infinity_m_prime: rational::format(&b),
        dominated: check_domination(&mats)?,
    })
}

impl fmt::Display for AnalysisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "faithful           {}", self.faithful)?;
        let verdict = match self.verdict {
            Verdict::Finite => "finite",
            Verdict::Infinite => "infinite",
        };
        writeln!(f, "verdict            {verdict}")?;
        writeln!(f, "lambda             {}", self.lambda)?;
        let mut line = |label: &str, v: Option<String>| -> fmt::Result {
            match v {
                Some(v) => writeln!(f, "{label:<18} {v}"),
                None => Ok(()),
            }
        };
        line("A", self.a.clone())?;
        line("A witness", self.a_witness.as_ref().map(|w| counts(w)))?;
        line("|Sigma|", self.sigma_size.map(|x| x.to_string()))?;
        line(
            "G~",
            self.gtilde_order.zip(self.gtilde_mode).map(|(o, m)| {
                let m = match m {
                    GTildeMode::Full => "full",
                    GTildeMode::Explicit => "explicit",
                };
                format!("order {o} ({m})")
            }),
        )?;
        line("|Sigma~_0|", self.sigma_tilde0_size.map(|x| x.to_string()))?;
        line("orbits", self.orbit_count.map(|x| x.to_string()))?;
        line("deg P", self.deg_p.map(|x| x.to_string()))?;
        line(
            "abscissae",
            self.abscissae.as_ref().map(|a| format!("ramified {}, archimedean {}", a.ramified, a.archimedean)),
        )?;
        line(
            "archimedean",
            self.archimedean.as_ref().map(|r| {
                format!("abscissa {} <= B_inf(M') {}: {}", r.arch_abscissa, r.b_infinity_m_prime, r.dominated)
            }),
        )?;
        if let Some(strata) = &self.strata {
            writeln!(f)?;
            writeln!(f, "{:>3} {:>3} {:>7}  subsets", "a", "b", "orbits")?;
            for s in strata {
                let subsets = s.subsets.iter().map(|c| counts(c)).collect::<Vec<_>>().join(" ");
                writeln!(f, "{:>3} {:>3} {:>7}  {subsets}", s.a, s.b, s.orbits)?;
            }
        }
        Ok(())
    }
}

fn counts(c: &[u64]) -> String {
    let mut s = String::from("(");
    for (i, x) in c.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let _ = write!(s, "{x}");
    }
    s.push(')');
    s
}

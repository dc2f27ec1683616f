//! JSON configuration for `simulate`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use qds3::integrability::AcsCouplings;
use qds3::qds::{build_bath, default_spacing, map_acs_to_qds, ohmic_bath, BathDiscretization, QdsParams};
use qds3::su3::ChargeSector;

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QdsBlock {
    pub eps3: f64,
    pub eps8: f64,
    pub delta: f64,
    pub zeta: f64,
    pub alpha: f64,
    pub omega_c: f64,
    /// Mode spacing; defaults to `5 ωc / n_modes`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_omega: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AcsBlock {
    pub j_par: f64,
    pub j_perp: f64,
    pub zeta12: f64,
    pub zeta13: f64,
    pub zeta23: f64,
    pub h1: f64,
    pub h2: f64,
    pub h3: f64,
    #[serde(rename = "L")]
    pub length_l: f64,
    pub v_fermi: f64,
    pub a: f64,
    #[serde(rename = "M3", default)]
    pub m3: f64,
    #[serde(rename = "M8", default)]
    pub m8: f64,
    #[serde(rename = "C", default)]
    pub c: f64,
    #[serde(rename = "C3", default)]
    pub c3: f64,
    #[serde(rename = "C8", default)]
    pub c8: f64,
}

impl AcsBlock {
    pub fn couplings(&self) -> AcsCouplings {
        AcsCouplings {
            j_par: self.j_par,
            j_perp: self.j_perp,
            zeta12: self.zeta12,
            zeta13: self.zeta13,
            zeta23: self.zeta23,
            h1: self.h1,
            h2: self.h2,
            h3: self.h3,
            length_l: self.length_l,
            v_fermi: self.v_fermi,
            reg_a: self.a,
        }
    }

    pub fn sector(&self) -> ChargeSector {
        ChargeSector { n0: 0, m3: self.m3, m8: self.m8, c: self.c, c3: self.c3, c8: self.c8 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub n_modes: usize,
    pub n_max: usize,
    pub t_final: f64,
    pub dt: f64,
    /// 1, 2 or 3.
    pub initial_level: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub krylov_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub krylov_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qds: Option<QdsBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub acs: Option<AcsBlock>,
}

impl SimConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| {
            CliError::Config(format!("line {}, column {}: {e}", e.line(), e.column()))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        match (&self.qds, &self.acs) {
            (Some(_), Some(_)) => return bad("`qds` and `acs` blocks are mutually exclusive".into()),
            (None, None) => return bad("one of `qds` or `acs` is required".into()),
            _ => {}
        }
        if self.n_modes < 1 || self.n_max < 1 {
            return bad("n_modes and n_max must be ≥ 1".into());
        }
        if !(self.dt > 0.0) || !(self.t_final >= 0.0) {
            return bad("need dt > 0 and t_final ≥ 0".into());
        }
        if !(1..=3).contains(&self.initial_level) {
            return bad(format!("initial_level must be 1, 2 or 3, got {}", self.initial_level));
        }
        if self.krylov_dim == Some(0) || self.krylov_tol.is_some_and(|t| !(t > 0.0)) {
            return bad("krylov_dim and krylov_tol must be positive".into());
        }
        if let Some(q) = &self.qds {
            if q.alpha < 0.0 {
                return bad(format!("alpha must be ≥ 0, got {}", q.alpha));
            }
            if !(q.omega_c > 0.0) {
                return bad(format!("omega_c must be > 0, got {}", q.omega_c));
            }
            if q.d_omega.is_some_and(|d| !(d > 0.0)) {
                return bad("d_omega must be > 0".into());
            }
        }
        if let Some(a) = &self.acs {
            a.couplings().validated().map_err(|e| CliError::Config(e.to_string()))?;
        }
        Ok(())
    }

    /// Three-level parameters and bath for this configuration.
    pub fn model(&self) -> Result<(QdsParams, BathDiscretization), CliError> {
        let cfg = |e: qds3::Error| CliError::Config(e.to_string());
        if let Some(q) = &self.qds {
            let p = QdsParams {
                eps3: q.eps3,
                eps8: q.eps8,
                delta: q.delta,
                zeta: q.zeta,
                alpha: q.alpha,
                omega_c: q.omega_c,
            };
            let dw = q.d_omega.unwrap_or_else(|| default_spacing(&p, self.n_modes));
            let bath = ohmic_bath(&p, self.n_modes, dw, self.n_max).map_err(cfg)?;
            Ok((p, bath))
        } else {
            let a = self.acs.as_ref().expect("validated");
            let c = a.couplings();
            let p = map_acs_to_qds(&c, &a.sector()).map_err(cfg)?;
            let bath = build_bath(self.n_modes, &c, self.n_max).map_err(cfg)?;
            Ok((p, bath))
        }
    }
}

pub fn load_config(path: &Path) -> Result<SimConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    SimConfig::from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const QDS: &str = r#"{"n_modes": 2, "n_max": 2, "t_final": 1.0, "dt": 0.1, "initial_level": 1,
        "qds": {"eps3": 0.0, "eps8": 0.0, "delta": 1.0, "zeta": 0.0, "alpha": 0.1, "omega_c": 2.0}}"#;

    #[test]
    fn valid_qds_block() {
        let c = SimConfig::from_json(QDS).unwrap();
        assert_eq!(c.qds.as_ref().unwrap().delta, 1.0);
        let (_, bath) = c.model().unwrap();
        assert_eq!(bath.n_modes(), 2);
    }

    #[test]
    fn negative_alpha_rejected() {
        let text = QDS.replace("\"alpha\": 0.1", "\"alpha\": -0.1");
        assert!(matches!(SimConfig::from_json(&text), Err(CliError::Config(_))));
    }

    #[test]
    fn both_blocks_rejected() {
        let text = QDS.replace(
            "\"qds\"",
            r#""acs": {"j_par": 0, "j_perp": 0.1, "zeta12": 0, "zeta13": 0, "zeta23": 0,
                "h1": 0, "h2": 0, "h3": 0, "L": 6.28, "v_fermi": 1, "a": 0.1}, "qds""#,
        );
        let e = SimConfig::from_json(&text).unwrap_err();
        assert!(e.to_string().contains("mutually exclusive"), "{e}");
    }

    #[test]
    fn unknown_keys_rejected() {
        let text = QDS.replace("\"dt\"", "\"bogus\": 1, \"dt\"");
        assert!(matches!(SimConfig::from_json(&text), Err(CliError::Config(_))));
    }

    #[test]
    fn parse_errors_carry_position() {
        let e = SimConfig::from_json("{\n  \"n_modes\": 2,\n  oops }").unwrap_err();
        assert!(e.to_string().contains("line 3"), "{e}");
    }

    #[test]
    fn acs_block_routes_through_map() {
        let text = r#"{"n_modes": 1, "n_max": 2, "t_final": 1.0, "dt": 0.1, "initial_level": 2,
            "acs": {"j_par": 0.5, "j_perp": 0.1, "zeta12": 0.1, "zeta13": 0.2, "zeta23": 0.4,
                    "h1": 0, "h2": 0, "h3": 0, "L": 6.283185307179586, "v_fermi": 1, "a": 0.5, "C": 0.1, "M3": 1}}"#;
        let (p, _) = SimConfig::from_json(text).unwrap().model().unwrap();
        assert!((p.alpha - 0.25).abs() < 1e-12);
        assert!((p.zeta - 0.3).abs() < 1e-12);
        assert!((p.eps3 + 0.1).abs() < 1e-12);
    }
}

//! Strategy registry: resolves CLI-style labels into blueprints.
//!
//! Grammar: `name[:arg][?key=value&key=value...]`, e.g. `cg:1`, `opt:0.5`,
//! `lqs?eps=0.05&a1=20`, `sigma-star?base=opt:1`. Parameters not given fall
//! back to the run's [`ExperimentConfig`].

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::composite::toolkit;
use crate::config::ExperimentConfig;
use crate::error::{SimError, SimResult};
use crate::strategy::{assert_a_bounded, constant_gain, optimal_known_a, Strategy};

pub fn parse_strategy(spec: &str, cfg: &ExperimentConfig) -> SimResult<Arc<dyn Strategy>> {
    let bad = |detail: &str| SimError::UnknownStrategy(format!("{spec} ({detail})"));
    let (head, query) = match spec.split_once('?') {
        Some((h, q)) => (h, Some(q)),
        None => (spec, None),
    };
    let (name, arg) = match head.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (head, None),
    };
    let mut params: BTreeMap<String, String> = BTreeMap::new();
    if let Some(q) = query {
        for pair in q.split('&').filter(|p| !p.is_empty()) {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| bad(&format!("malformed parameter `{pair}`")))?;
            params.insert(k.to_string(), v.to_string());
        }
    }
    let num = |s: &str| -> SimResult<f64> {
        s.parse::<f64>()
            .map_err(|_| bad(&format!("`{s}` is not a number")))
    };
    // Apply ?-overrides onto a copy of the run config.
    let mut cfg = cfg.clone();
    for (k, v) in &params {
        match k.as_str() {
            "eps" => cfg.eps = num(v)?,
            "eps0" => cfg.eps0 = num(v)?,
            "a" | "A" | "a_bound" => cfg.a_bound = num(v)?,
            "a1" | "A1" => cfg.a1 = num(v)?,
            "c0" => cfg.c0 = num(v)?,
            "q_big" => cfg.q_big = num(v)?,
            "q0_star" => cfg.q0_star = num(v)?,
            "q_rare" => cfg.q_rare = num(v)?,
            "base" => {} // consumed below
            other => return Err(bad(&format!("unknown parameter `{other}`"))),
        }
    }

    let base_for_star = |cfg: &ExperimentConfig| -> SimResult<Arc<dyn Strategy>> {
        let base_spec = params.get("base").map(String::as_str).unwrap_or("opt:1");
        let base = parse_strategy(base_spec, cfg)?;
        Ok(Arc::new(assert_a_bounded(
            base,
            cfg.a_bound,
            cfg.abound_c0,
            cfg.abound_m0,
        )?))
    };

    match name {
        "cg" => {
            let alpha = num(arg.ok_or_else(|| bad("cg needs a gain, e.g. cg:1"))?)?;
            Ok(Arc::new(constant_gain(alpha)?))
        }
        "opt" => {
            let alpha = num(arg.ok_or_else(|| bad("opt needs a drift, e.g. opt:0"))?)?;
            Ok(Arc::new(optimal_known_a(alpha)))
        }
        "lqs" => Ok(Arc::new(toolkit::lqs_from_config(&cfg)?)),
        "las" => Ok(Arc::new(toolkit::las_from_config(&cfg)?)),
        "br" => Ok(Arc::new(toolkit::br_from_config(&cfg)?)),
        "sigma-star" => Ok(Arc::new(toolkit::sigma_star_from_config(
            base_for_star(&cfg)?,
            &cfg,
        )?)),
        "zero-start" => Ok(Arc::new(toolkit::zero_start_from_config(
            base_for_star(&cfg)?,
            &cfg,
        )?)),
        _ => Err(bad("no such strategy")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_primitives_and_composites() {
        let cfg = ExperimentConfig::default();
        for spec in [
            "cg:0",
            "cg:1.5",
            "opt:0",
            "opt:-2",
            "lqs",
            "lqs?eps=0.05&A1=20",
            "las",
            "br?q_big=10",
            "sigma-star",
            "sigma-star?base=opt:2&a=30",
            "zero-start",
        ] {
            let s = parse_strategy(spec, &cfg).unwrap_or_else(|e| panic!("{spec}: {e}"));
            assert!(!s.label().is_empty());
        }
    }

    #[test]
    fn rejects_unknown_names_and_malformed_args() {
        let cfg = ExperimentConfig::default();
        assert!(parse_strategy("nope", &cfg).is_err());
        assert!(parse_strategy("cg", &cfg).is_err());
        assert!(parse_strategy("cg:abc", &cfg).is_err());
        assert!(parse_strategy("cg:-1", &cfg).is_err());
        assert!(parse_strategy("lqs?bogus=1", &cfg).is_err());
    }
}

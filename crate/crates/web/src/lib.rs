//! Browser bindings. Every export takes plain arguments and returns a JSON
//! string; the [`api`] functions behind them run natively too.

use wasm_bindgen::prelude::*;

pub mod api {
    use polychain::chain::{realize, segments, LinkVector};
    use polychain::dp::{dedup_reversal, Engine, Objective};
    use polychain::index::{preset, ti_direct, IndexFunction};
    use polychain::Value;
    use serde_json::{json, Value as Json};

    /// Chains listed per extremal query.
    pub const CHAIN_LIMIT: usize = 24;

    /// Largest n accepted for curves and extremal queries.
    pub const N_LIMIT: usize = 100_000;

    fn index(name: &str) -> Result<IndexFunction, String> {
        preset(name).map_err(|e| e.to_string())
    }

    fn number(v: &Value) -> Json {
        json!({ "exact": v.exact(), "decimal": v.decimal(), "approx": v.to_f64() })
    }

    fn shape(chain: &LinkVector) -> Json {
        json!({
            "links": chain,
            "text": chain.to_string(),
            "cells": realize(chain).cells(),
            "segments": segments(chain).lengths(),
        })
    }

    fn check_n(n: usize, lo: usize) -> Result<(), String> {
        if !(lo..=N_LIMIT).contains(&n) {
            return Err(format!("n must lie in {lo}..={N_LIMIT}"));
        }
        Ok(())
    }

    /// Optimum for `n` squares with the first optimal chains laid out as cells.
    pub fn extremal(name: &str, n: usize, minimize: bool) -> Result<String, String> {
        check_n(n, 3)?;
        let f = index(name)?;
        let engine = Engine::new(&f);
        let (objective, working) = if minimize {
            (Objective::Min, engine.negate())
        } else {
            (Objective::Max, engine)
        };
        let table = working.run(n).map_err(|e| e.to_string())?;
        let result = table.extremal(f.name(), objective, None);
        let chains: Vec<Json> = table.optimal_chains(None).take(CHAIN_LIMIT).map(|c| shape(&c)).collect();
        let listed_all = result.labeled_count <= CHAIN_LIMIT.into();
        let distinct = listed_all.then(|| dedup_reversal(table.optimal_chains(None)).count());
        Ok(json!({
            "index": f.name(),
            "n": n,
            "objective": objective,
            "value": number(&result.value),
            "labeled_count": result.labeled_count.to_string(),
            "distinct_up_to_reversal": distinct,
            "tolerance_dependent": result.tolerance_dependent,
            "chains": chains,
            "truncated": !listed_all,
        })
        .to_string())
    }

    /// `M(n)` and `m(n)` for `from <= n <= to`, one table pass each.
    pub fn value_curve(name: &str, from: usize, to: usize) -> Result<String, String> {
        check_n(from, 3)?;
        check_n(to, 3)?;
        if from > to {
            return Err(format!("from ({from}) exceeds to ({to})"));
        }
        let f = index(name)?;
        let engine = Engine::new(&f);
        let high = engine.run(to).map_err(|e| e.to_string())?;
        let low = engine.negate().run(to).map_err(|e| e.to_string())?;
        let points: Vec<Json> = (from..=to)
            .map(|n| {
                let top = high.winning_ends(n).first().expect("nonempty");
                let bottom = low.winning_ends(n).first().expect("nonempty");
                json!({
                    "n": n,
                    "max": number(&high.value(n, top)),
                    "min": number(&low.value(n, bottom).neg()),
                })
            })
            .collect();
        Ok(json!({ "index": f.name(), "points": points }).to_string())
    }

    /// Value and layout of one chain given as `1,2,2,1`.
    pub fn chain_value(name: &str, links: &str) -> Result<String, String> {
        let f = index(name)?;
        let chain: LinkVector = links.parse().map_err(|e: polychain::Error| e.to_string())?;
        if chain.square_count() > N_LIMIT {
            return Err(format!("at most {N_LIMIT} squares"));
        }
        let mut out = shape(&chain);
        out["index"] = f.name().into();
        out["squares"] = chain.square_count().into();
        out["value"] = number(&ti_direct(&chain, &f));
        Ok(out.to_string())
    }

    pub fn presets() -> String {
        json!(polychain::index::Preset::NAMES).to_string()
    }
}

fn js(r: Result<String, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn extremal(index: &str, n: u32, minimize: bool) -> Result<String, JsError> {
    js(api::extremal(index, n as usize, minimize))
}

#[wasm_bindgen(js_name = valueCurve)]
pub fn value_curve(index: &str, from: u32, to: u32) -> Result<String, JsError> {
    js(api::value_curve(index, from as usize, to as usize))
}

#[wasm_bindgen(js_name = chainValue)]
pub fn chain_value(index: &str, links: &str) -> Result<String, JsError> {
    js(api::chain_value(index, links))
}

#[wasm_bindgen]
pub fn presets() -> String {
    api::presets()
}

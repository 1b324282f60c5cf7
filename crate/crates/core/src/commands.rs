//! Single-operation commands: JSON in, JSON out.

use serde_json::{json, Map, Value};

use crate::calogero::{cm_representative, cm_trace_square, hamiltonian, verify_cm_point, CMParams};
use crate::components::{
    component_representative, defective_representative, enumerate_components, ComponentParams,
    DefectiveParams,
};
use crate::json::{
    as_object, field, mat_to_json, parse_context, parse_index, parse_quad, parse_rats,
    parse_region_mat, quad_to_json, rat_to_json, rats_to_json, CliResult,
};
use crate::moment::moment_map;
use crate::parabolic::{ParabolicContext, Region};
use crate::semicanonical::{is_semicanonical, semicanonicalize, spec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Single {
    Moment,
    Semicanonical,
    Spec,
    Components,
    Cm,
    Hamiltonian,
}

impl Single {
    pub fn name(self) -> &'static str {
        match self {
            Single::Moment => "moment",
            Single::Semicanonical => "semicanonical",
            Single::Spec => "spec",
            Single::Components => "components",
            Single::Cm => "cm",
            Single::Hamiltonian => "hamiltonian",
        }
    }
}

/// Runs one operation on a JSON input object.
///
/// Every input carries `alpha` (and optionally `n`, `allow_conjecture`):
///
/// - `moment`: `r, s, i, j` -> `mu`
/// - `semicanonical`: `r` -> `m, b, b_inverse, partition, steps`
/// - `spec`: `r` -> `spec`
/// - `components`: nothing -> `components`; or `a, rho, sigma` (and
///   optionally `aprime`) -> a representative
/// - `cm`: `rho, sigma` -> representative, `trace_square`, point report
/// - `hamiltonian`: `rho, sigma` -> `trace_square` and its decomposition
pub fn cmd_single(kind: Single, input: &Value) -> CliResult<Value> {
    let ctx = parse_context(input)?;
    let obj = as_object(input, "")?;
    match kind {
        Single::Moment => {
            let q = parse_quad(&ctx, input)?;
            Ok(json!({ "mu": mat_to_json(&moment_map(&ctx, &q)) }))
        }
        Single::Semicanonical => {
            let r = parse_region_mat(&ctx, obj, "r", Region::P)?;
            let res = semicanonicalize(&ctx, &r)?;
            let steps: Vec<Value> = res
                .steps
                .iter()
                .map(|s| json!({ "row": s.row + 1, "col": s.col + 1, "x": rat_to_json(&s.x) }))
                .collect();
            debug_assert!(is_semicanonical(&ctx, &res.m).is_ok());
            Ok(json!({
                "m": mat_to_json(&res.m),
                "b": mat_to_json(res.b.matrix()),
                "b_inverse": mat_to_json(res.b.inverse()),
                "partition": res.partition.one_based(),
                "steps": steps,
            }))
        }
        Single::Spec => {
            let r = parse_region_mat(&ctx, obj, "r", Region::P)?;
            let s = spec(&ctx, &r)?;
            Ok(json!({ "spec": s.0.iter().map(|b| rats_to_json(b)).collect::<Vec<_>>() }))
        }
        Single::Components => components(&ctx, obj),
        Single::Cm => {
            let p = cm_params(&ctx, obj)?;
            let q = cm_representative(&ctx, &p)?;
            let report = verify_cm_point(&ctx, &p)?;
            Ok(json!({
                "quad": quad_to_json(&q),
                "trace_square": rat_to_json(&cm_trace_square(&ctx, &p)?),
                "report": report,
            }))
        }
        Single::Hamiltonian => {
            let p = cm_params(&ctx, obj)?;
            let h = hamiltonian(&ctx, &p)?;
            let trace = cm_trace_square(&ctx, &p)?;
            Ok(json!({
                "trace_square": rat_to_json(&trace),
                "free": rat_to_json(&h.free),
                "interactions": rats_to_json(&h.interactions),
            }))
        }
    }
}

fn cm_params(ctx: &ParabolicContext, obj: &Map<String, Value>) -> CliResult<CMParams> {
    Ok(CMParams {
        rho: parse_rats(field(obj, "", "rho")?, "/rho", Some(ctx.n()))?,
        sigma: parse_rats(field(obj, "", "sigma")?, "/sigma", Some(ctx.n()))?,
    })
}

fn components(ctx: &ParabolicContext, obj: &Map<String, Value>) -> CliResult<Value> {
    if !obj.contains_key("a") {
        let all = enumerate_components(ctx);
        return Ok(json!({ "count": all.len(), "components": all }));
    }
    let a = parse_index(ctx, obj, "a")?;
    let rho = parse_rats(field(obj, "", "rho")?, "/rho", Some(ctx.n()))?;
    let sigma = parse_rats(field(obj, "", "sigma")?, "/sigma", Some(ctx.n()))?;
    let q = if obj.contains_key("aprime") {
        let aprime = parse_index(ctx, obj, "aprime")?;
        defective_representative(
            ctx,
            &DefectiveParams {
                a,
                aprime,
                rho,
                sigma,
            },
        )?
    } else {
        component_representative(ctx, &ComponentParams { a, rho, sigma })?
    };
    Ok(json!({ "quad": quad_to_json(&q), "mu": mat_to_json(&moment_map(ctx, &q)) }))
}

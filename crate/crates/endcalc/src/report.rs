//! JSON and text renderings of classification reports.

use std::fmt::Write as _;

use endcalc_core::{ClassificationReport, FluxRank, ObstructionWitness};
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, Default)]
pub struct ReportOptions {
    pub witness: bool,
    pub bounds: bool,
}

fn witness_json(w: &ObstructionWitness) -> Value {
    json!({
        "target": {
            "free_rank": w.target.free_rank,
            "torsion2": w.target.torsion2,
        },
        "characters": w.characters.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "generator_images": w
            .generator_images
            .iter()
            .map(|(name, image)| json!({ "generator": name, "image": image }))
            .collect::<Vec<_>>(),
    })
}

/// The report as a JSON value with fixed field names. `witness` is `null`
/// unless requested and present.
pub fn to_json(r: &ClassificationReport, opts: ReportOptions) -> Value {
    let b = &r.bounds;
    let flux_rank = match b.flux_rank {
        FluxRank::Rank(n) => json!(n),
        FluxRank::NotApplicable => json!("NOT_APPLICABLE"),
    };
    let witness = match (&r.tng.witness, opts.witness) {
        (Some(w), true) => witness_json(w),
        _ => Value::Null,
    };
    json!({
        "countable": r.countable,
        "self_similar": r.self_similarity.to_string(),
        "M": r.invariants.m,
        "C": r.invariants.c,
        "M_iso": r.invariants.m_iso,
        "G0_count": r.invariants.g0.len(),
        "verdict": r.tng.verdict.to_string(),
        "rule": r.tng.rule.tag(),
        "witness": witness,
        "bounds": {
            "lower": b.lower,
            "upper": b.upper,
            "flux_rank": flux_rank,
            "handle_pair_generators": b.handle_pair_generators,
            "budget": {
                "shifts": b.budget.shifts,
                "dehn": b.budget.dehn,
                "handles": b.budget.handles,
            },
            "abelianization_upper": b.abelianization_upper,
        },
        "notes": r.notes,
    })
}

pub fn emit_json(r: &ClassificationReport, opts: ReportOptions) -> String {
    serde_json::to_string_pretty(&to_json(r, opts)).expect("report values serialize")
}

pub fn emit_text(r: &ClassificationReport, opts: ReportOptions) -> String {
    let mut out = String::new();
    let inv = &r.invariants;
    let _ = writeln!(out, "verdict:       {}", r.tng.verdict);
    let _ = writeln!(out, "rule:          {}", r.tng.rule);
    let _ = writeln!(out, "countable:     {}", r.countable);
    let _ = writeln!(out, "self-similar:  {}", r.self_similarity);
    let _ = writeln!(
        out,
        "invariants:    M={} C={} M_iso={} G0={}",
        inv.m,
        inv.c,
        inv.m_iso,
        inv.g0.len()
    );
    for root in &inv.maximal_classes {
        let _ = writeln!(
            out,
            "  maximal:     {} * {}",
            root.end_type, root.multiplicity
        );
    }
    if opts.bounds {
        let b = &r.bounds;
        let flux = match b.flux_rank {
            FluxRank::Rank(n) => n.to_string(),
            FluxRank::NotApplicable => "n/a".into(),
        };
        let _ = writeln!(out, "bounds:        lower={} upper={}", b.lower, b.upper);
        let _ = writeln!(
            out,
            "budget:        shifts={} dehn={} handles={}",
            b.budget.shifts, b.budget.dehn, b.budget.handles
        );
        let _ = writeln!(out, "flux rank:     {flux}");
        let _ = writeln!(out, "handle pairs:  {}", b.handle_pair_generators);
        if let Some(a) = b.abelianization_upper {
            let _ = writeln!(out, "abelianization rank at most {a}");
        }
    }
    if let (true, Some(w)) = (opts.witness, &r.tng.witness) {
        let _ = writeln!(
            out,
            "witness:       Z^{} x (Z/2)^{}",
            w.target.free_rank, w.target.torsion2
        );
        for c in &w.characters {
            let _ = writeln!(out, "  character:   {c}");
        }
        for (name, image) in &w.generator_images {
            let _ = writeln!(out, "  {name} -> {image:?}");
        }
    }
    for n in &r.notes {
        let _ = writeln!(out, "note: {n}");
    }
    out
}

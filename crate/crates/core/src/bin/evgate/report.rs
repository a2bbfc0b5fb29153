//! Plain-text rendering for terminal output.

use std::fmt::Write as _;

use evidence_gate::gate::GateTrace;
use evidence_gate::pipeline::{Engine, Explanation, QueryOutcome};

fn gate_lines(out: &mut String, t: &GateTrace) {
    let reasons: Vec<&str> = t.reasons.iter().map(|r| r.as_str()).collect();
    let _ = writeln!(
        out,
        "gate: {}{}",
        t.decision.as_str(),
        if reasons.is_empty() { String::new() } else { format!(" ({})", reasons.join(", ")) }
    );
    let _ = writeln!(
        out,
        "n={} mean_rel={:.3} mean_mue={:.3} max_sim={:.3} max_rel={:.3} anchor_ok={} phrase_ok={}",
        t.n,
        t.mean_rel,
        t.mean_mue,
        t.max_sim,
        t.max_rel,
        u8::from(t.anchor_ok),
        u8::from(t.phrase_ok)
    );
}

pub fn outcome(o: &QueryOutcome) -> String {
    let mut out = String::new();
    gate_lines(&mut out, &o.trace);
    out.push_str("evidence:\n");
    for e in &o.evidence {
        let _ = writeln!(
            out,
            "  {} sim={:.3} rel={:.3} ci={:.3} mue={:.3}  {}",
            e.citation(),
            e.sim,
            e.rel,
            e.ci,
            e.mue,
            e.text
        );
    }
    match &o.answer {
        Some(a) => {
            let _ = writeln!(out, "answer:\n{a}");
        }
        None => out.push_str("abstained: the evidence does not support an answer\n"),
    }
    out
}

pub fn explanation(engine: &Engine, x: &Explanation) -> String {
    let corpus = engine.corpus();
    let cite = |id| corpus.unit(id).map(|u| u.citation()).unwrap_or_default();
    let mut out = String::new();
    let _ = writeln!(out, "question: {}", x.analysis.raw);
    let _ = writeln!(out, "content terms: {}", x.analysis.terms.joined());
    let phrases: Vec<&str> = x.analysis.matched_phrases.iter().map(|p| p.as_str()).collect();
    let _ = writeln!(out, "matched phrases: {}", if phrases.is_empty() { "-".into() } else { phrases.join(", ") });

    let _ = writeln!(out, "\ncandidates ({}):", x.scored.len());
    let _ = writeln!(out, "  {:<24} {:>7} {:>7} {:>7} {:>7}  text", "unit", "sim", "rel", "ci", "mue");
    for c in &x.scored {
        let text = engine.unit_text(c.unit_id).unwrap_or_default();
        let _ = writeln!(
            out,
            "  {:<24} {:>7.4} {:>7.4} {:>7.4} {:>7.4}  {}",
            cite(c.unit_id),
            c.sim,
            c.rel,
            c.ci,
            c.mue,
            text
        );
    }

    let _ = writeln!(out, "\nselection:");
    for (i, s) in x.steps.iter().enumerate() {
        let _ = write!(
            out,
            "  {}. {} mue={:.4} redundancy={:.4} adjusted={:.4}",
            i + 1,
            cite(s.chosen),
            s.mue,
            s.redundancy,
            s.adjusted
        );
        if !s.suppressed.is_empty() {
            let dropped: Vec<String> = s.suppressed.iter().map(|&id| cite(id)).collect();
            let _ = write!(out, " suppressed {}", dropped.join(" "));
        }
        out.push('\n');
    }
    if x.evidence.exhausted {
        out.push_str("  (candidates exhausted)\n");
    }
    out.push('\n');
    gate_lines(&mut out, &x.trace);
    out
}

//! Text output. Every renderer reads the JSON report, so text never carries
//! anything the JSON does not.

use std::fmt::Write;

use serde_json::Value;
use specpencil_core::format::CycJson;
use specpencil_core::ClassificationReport;

use crate::commands::Kind;

pub fn json(kind: Kind, r: &Value) -> String {
    if kind == Kind::Classify {
        if let Ok(report) = serde_json::from_value::<ClassificationReport>(r.clone()) {
            return report.to_json();
        }
    }
    serde_json::to_string_pretty(r).expect("serializes")
}

pub fn text(kind: Kind, r: &Value) -> String {
    let mut out = String::new();
    match kind {
        Kind::Fourier => fourier(&mut out, r),
        Kind::Relations => relations(&mut out, r),
        Kind::Remark27 => remark27(&mut out, r),
        Kind::Lemma41 => lemma41(&mut out, r),
        Kind::Classify => classify(&mut out, r),
        Kind::ScanH4 => scan_h4(&mut out, r),
        Kind::HadamardCheck => hadamard_check(&mut out, r),
        Kind::HadamardSimilar => similar(&mut out, r),
        Kind::Spectrum => spectrum(&mut out, r),
        // data, not a report
        Kind::Matrix => out.push_str(&serde_json::to_string_pretty(r).expect("serializes")),
    }
    out
}

fn verdict(out: &mut String, passed: bool) {
    out.push_str(if passed { "result: pass\n" } else { "result: FAIL\n" });
}

fn flag(v: &Value) -> bool {
    v.as_bool().unwrap_or(false)
}

fn conductor_note(out: &mut String, polys: &[&Value]) {
    let m = polys.iter().filter_map(|p| p["poly"]["conductor"].as_u64()).max().unwrap_or(1);
    if m > 1 {
        let _ = writeln!(out, "(w = exp(2*pi*i/{m}))");
    }
}

fn number(v: &Value) -> String {
    match serde_json::from_value::<CycJson>(v.clone()).ok().and_then(|c| c.to_number().ok()) {
        Some(c) if c.is_rational() => c.terms_string(),
        Some(c) => c.to_string(),
        None => "none".into(),
    }
}

fn names(v: &Value) -> String {
    v.as_array()
        .map(|a| a.iter().filter_map(Value::as_str).collect::<Vec<_>>().join(", "))
        .unwrap_or_default()
}

fn fourier(out: &mut String, r: &Value) {
    let _ = writeln!(
        out,
        "spectrum of {}, n = {}, variables {}",
        r["matrices"].as_str().unwrap_or("?"),
        r["n"],
        names(&r["vars"])
    );
    let _ = writeln!(out, "computed: {}", r["computed"]["text"].as_str().unwrap_or(""));
    let _ = writeln!(out, "target:   {}", r["target"]["text"].as_str().unwrap_or(""));
    conductor_note(out, &[&r["computed"], &r["target"]]);
    if r["ratio"].is_null() {
        out.push_str("not proportional to the target surface\n");
    } else {
        let _ = writeln!(out, "ratio:    {}", number(&r["ratio"]));
        let _ = writeln!(out, "matched surface: {}", r["target"]["text"].as_str().unwrap_or(""));
    }
    verdict(out, flag(&r["passed"]));
}

fn checks(out: &mut String, list: &Value) {
    for c in list.as_array().into_iter().flatten() {
        let mark = if flag(&c["passed"]) { "ok  " } else { "FAIL" };
        let _ = writeln!(out, "  {mark} {}", c["name"].as_str().unwrap_or(""));
    }
}

fn count_passed(list: &Value) -> (usize, usize) {
    let all = list.as_array().map_or(&[][..], Vec::as_slice);
    (all.iter().filter(|c| flag(&c["passed"])).count(), all.len())
}

fn relations(out: &mut String, r: &Value) {
    let (ok, total) = count_passed(&r["checks"]);
    let _ = writeln!(out, "identities for A and the cyclic shift B, n = {}", r["n"]);
    checks(out, &r["checks"]);
    let _ = writeln!(out, "{ok} of {total} hold exactly");
    verdict(out, flag(&r["passed"]));
}

fn remark27(out: &mut String, r: &Value) {
    out.push_str("order-3 relations\n");
    checks(out, &r["relations"]);
    out.push_str("spectra\n");
    for s in r["spectra"].as_array().into_iter().flatten() {
        let _ = writeln!(
            out,
            "  {}: {}  (ratio to {}: {})",
            s["matrices"].as_str().unwrap_or(""),
            s["computed"]["text"].as_str().unwrap_or(""),
            s["target"]["text"].as_str().unwrap_or(""),
            number(&s["ratio"])
        );
    }
    if r["diagonal_equivalence"].is_null() {
        out.push_str("no diagonal unitary conjugation maps one shift to the other\n");
    } else {
        out.push_str("a diagonal unitary conjugation maps one shift to the other\n");
    }
    verdict(out, flag(&r["passed"]));
}

fn lemma41(out: &mut String, r: &Value) {
    let list = r["witnesses"].as_array().map_or(&[][..], Vec::as_slice);
    let _ = writeln!(out, "witnesses for B(P1, P2) with an affine factor, n = {}, seed {}", r["n"], r["seed"]);
    for case in ["left_affine", "right_affine"] {
        let of_case: Vec<&Value> = list.iter().filter(|w| w["case"] == case).collect();
        let ok = of_case.iter().filter(|w| flag(&w["verified"])).count();
        let label = if case == "left_affine" { "P1 affine" } else { "P2 affine" };
        let _ = writeln!(out, "  {label}: {ok} of {} verified", of_case.len());
    }
    for w in list.iter().filter(|w| !flag(&w["verified"])) {
        let _ = writeln!(
            out,
            "  FAIL P1 = {} P2 = {}: {}",
            w["p1"],
            w["p2"],
            w["note"].as_str().unwrap_or("equality check failed")
        );
    }
    let _ = writeln!(out, "  hat identities: {}", if flag(&r["hats_identity"]) { "ok" } else { "FAIL" });
    verdict(out, flag(&r["all_verified"]));
}

fn classify(out: &mut String, r: &Value) {
    let len = |v: &Value| v.as_array().map_or(0, Vec::len);
    let _ = writeln!(out, "n = {}: scanned {} of {} pairs", r["n"], r["pairs_scanned"], r["pairs_total"]);
    let _ = writeln!(out, "fourier-spectrum pairs: {}", len(&r["fourier_pairs"]));
    let _ = writeln!(out, "predicted (P1 or P2 affine): {}", len(&r["predicted"]));
    let _ = writeln!(out, "mismatches: {}", len(&r["mismatches"]));
    for m in r["mismatches"].as_array().into_iter().flatten() {
        let _ = writeln!(out, "  P1 = {} P2 = {}", m[0], m[1]);
    }
    if !flag(&r["complete"]) {
        out.push_str("scan stopped early\n");
    }
    let _ = writeln!(out, "match: {}", flag(&r["match"]));
    if let Some(ms) = r["elapsed_ms"].as_u64() {
        let _ = writeln!(out, "elapsed: {ms} ms");
    }
    verdict(out, flag(&r["match"]));
}

fn scan_h4(out: &mut String, r: &Value) {
    let total = &r["pairs_per_sample"];
    let _ = writeln!(out, "z^2 coefficient of det(z*A*B - I), {} pairs per t", total);
    for s in r["samples"].as_array().into_iter().flatten() {
        let marker = if flag(&s["is_plus_minus_i"]) { "  (t = +-i)" } else { "" };
        let _ = writeln!(
            out,
            "  t = {}: vanishes on {} of {}{}",
            s["t_text"].as_str().unwrap_or(""),
            s["vanishing_pairs"],
            total,
            marker
        );
    }
    let _ = writeln!(out, "criterion: {}", r["criterion"].as_str().unwrap_or(""));
    let _ = writeln!(out, "vanishes on all pairs iff t = +-i: {}", flag(&r["all_vanish_iff_pm_i"]));
    let _ = writeln!(out, "vanishes on some pair iff t = +-i: {}", flag(&r["some_vanish_iff_pm_i"]));
    verdict(out, flag(&r["all_vanish_iff_pm_i"]));
}

fn hadamard_check(out: &mut String, r: &Value) {
    let _ = write!(out, "{}: {}x{} ", r["file"].as_str().unwrap_or(""), r["n"], r["n"]);
    if flag(&r["hadamard"]) {
        out.push_str("complex Hadamard\n");
        let t = if flag(&r["transition_hadamard"]) { "is" } else { "is NOT" };
        let _ = writeln!(out, "eigenvector transition matrix {t} Hadamard");
    } else {
        let _ = writeln!(out, "not Hadamard: {}", r["violation"]["detail"].as_str().unwrap_or(""));
    }
    verdict(out, flag(&r["passed"]));
}

fn similar(out: &mut String, r: &Value) {
    let files = &r["files"];
    let (a, b) = (files[0].as_str().unwrap_or(""), files[1].as_str().unwrap_or(""));
    if flag(&r["similar"]) {
        let w = &r["witness"];
        let _ = writeln!(out, "{b} = D1*P1*h1*P2*D2 with h1 = {a}");
        let _ = writeln!(out, "  P1 = {}", w["p1"]);
        let _ = writeln!(out, "  P2 = {}", w["p2"]);
        for key in ["lambda1", "lambda2"] {
            let diag: Vec<String> = w[key].as_array().into_iter().flatten().map(number).collect();
            let label = if key == "lambda1" { "D1" } else { "D2" };
            let _ = writeln!(out, "  {label} = diag({})", diag.join(", "));
        }
    } else {
        let _ = writeln!(out, "{a} and {b} are not similar");
    }
    verdict(out, flag(&r["similar"]));
}

fn spectrum(out: &mut String, r: &Value) {
    let _ = writeln!(out, "det(sum of v*M - I) over {}, n = {}", names(&r["vars"]), r["n"]);
    let _ = writeln!(out, "{}", r["spectrum"]["text"].as_str().unwrap_or(""));
    conductor_note(out, &[&r["spectrum"]]);
}

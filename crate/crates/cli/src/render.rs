//! Human-readable text reports. Values are shown to 4 decimals.

use std::fmt::Write;

use hre_core::report::{CheckReport, CompareReport, RankReport, TriadReport};

fn triad(t: &Option<TriadReport>) -> String {
    match t {
        Some(t) => format!(
            "({}, {}, {}) kappa = {:.4}",
            t.labels[0], t.labels[1], t.labels[2], t.kappa
        ),
        None => "-".to_string(),
    }
}

fn bound(b: Option<f64>) -> String {
    b.map_or_else(|| "- (scalar case)".to_string(), |b| format!("{b:.4}"))
}

fn verdict(guaranteed: bool) -> &'static str {
    if guaranteed {
        "guaranteed"
    } else {
        "not guaranteed"
    }
}

fn width(labels: &[String]) -> usize {
    labels.iter().map(|l| l.chars().count()).max().unwrap_or(0).max(7)
}

pub fn rank(r: &RankReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "concepts      n = {}, known r = {}, unknown k = {}", r.n, r.r, r.k);
    let _ = writeln!(out, "K(M)          {:.4}", r.kappa_full);
    let _ = writeln!(out, "K(M~)         {:.4}", r.kappa_minor);
    let _ = writeln!(out, "bound         {}", bound(r.bound));
    let _ = writeln!(out, "solvability   {}", verdict(r.guaranteed));
    let _ = writeln!(out, "worst triad   {}", triad(&r.worst_triad));
    let _ = writeln!(out, "worst in M~   {}", triad(&r.worst_minor_triad));
    if let Some(values) = &r.ranking {
        let w = width(&r.labels);
        let _ = writeln!(out);
        let _ = writeln!(out, "{:<w$}  {:>12}  source", "concept", "value");
        for v in values {
            let src = if v.known { "known" } else { "estimated" };
            let _ = writeln!(out, "{:<w$}  {:>12.4}  {src}", v.label, v.value);
        }
    }
    if let Some(d) = &r.diagnostics {
        let _ = writeln!(out);
        let _ = writeln!(out, "residual      {:.4e}", d.residual);
        let _ = writeln!(out, "condition     {:.4e}", d.condition_estimate);
    }
    if let Some(e) = &r.error {
        let _ = writeln!(out);
        let _ = writeln!(out, "error         {}", e.message);
        if let Some(sol) = &e.solution {
            for (label, v) in r.unknown.iter().zip(sol) {
                let _ = writeln!(out, "  {label} = {v:.4}");
            }
        }
    }
    out
}

pub fn check(c: &CheckReport) -> String {
    let cert = &c.certificate;
    let ev = &cert.m_matrix_evidence;
    let yes = |b: bool| if b { "yes" } else { "no" };
    let mut out = String::new();
    let _ = writeln!(out, "concepts      n = {}, known r = {}, unknown k = {}", cert.n, cert.r, cert.k);
    let _ = writeln!(out, "K(M)          {:.4}", cert.kappa_full);
    let _ = writeln!(out, "K(M~)         {:.4}", cert.kappa_minor);
    let _ = writeln!(out, "bound         {}", bound(cert.bound));
    let _ = writeln!(out, "alpha         {:.4}", cert.alpha);
    let _ = writeln!(out, "solvability   {}", verdict(cert.guaranteed));
    let _ = writeln!(out, "worst triad   {}", triad(&c.worst_triad));
    let _ = writeln!(out, "worst in M~   {}", triad(&c.worst_minor_triad));
    let _ = writeln!(out);
    let _ = writeln!(out, "M-matrix      {}", yes(ev.is_m_matrix));
    let _ = writeln!(out, "  Z-class             {}", yes(ev.in_z_class));
    let _ = writeln!(out, "  nonsingular         {}", yes(ev.nonsingular));
    match ev.inverse_min_entry {
        Some(m) => {
            let _ = writeln!(out, "  inverse >= 0        {} (min {m:.4e})", yes(ev.inverse_nonnegative));
        }
        None => {
            let _ = writeln!(out, "  inverse >= 0        {}", yes(ev.inverse_nonnegative));
        }
    }
    if let Some(d) = &ev.decomposition {
        let _ = writeln!(
            out,
            "  s > rho(B)          {} (s = {:.4}, rho = {:.4})",
            yes(ev.spectral_nonsingular),
            d.s,
            d.spectral_radius
        );
    }
    let _ = writeln!(out, "  positive row sums   {}", yes(ev.positive_row_sums));
    let _ = writeln!(out, "  witness A x > 0     {}", yes(ev.semipositive_witness.is_some()));
    out
}

pub fn compare(c: &CompareReport) -> String {
    let w = width(&c.labels);
    let mut out = String::new();
    match &c.comparison {
        Some(cmp) => {
            let _ = writeln!(out, "{:<w$}  {:>10}  {:>11}  {:>8}", "concept", "hre", "eigenvector", "ratio");
            for (i, label) in cmp.labels.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{label:<w$}  {:>10.4}  {:>11.4}  {:>8.4}",
                    cmp.hre_normalized[i], cmp.eigenvector[i], cmp.value_ratios[i]
                );
            }
            let _ = writeln!(out);
            let _ = writeln!(out, "hre order          {}", cmp.hre_order.join(" > "));
            let _ = writeln!(out, "eigenvector order  {}", cmp.eigenvector_order.join(" > "));
            let _ = writeln!(out, "kendall tau        {:.4}", cmp.kendall_tau);
        }
        None => {
            match (&c.hre.result, &c.hre.error) {
                (Some(r), _) => {
                    let _ = writeln!(out, "hre");
                    for v in &r.values {
                        let _ = writeln!(out, "  {:<w$}  {:>12.4}", v.label, v.value);
                    }
                }
                (_, Some(e)) => {
                    let _ = writeln!(out, "hre                error: {}", e.message);
                }
                _ => {}
            }
            match (&c.eigenvector.result, &c.eigenvector.error) {
                (Some(r), _) => {
                    let _ = writeln!(out, "eigenvector (lambda_max = {:.4})", r.dominant_eigenvalue);
                    for v in &r.values {
                        let _ = writeln!(out, "  {:<w$}  {:>12.4}", v.label, v.value);
                    }
                }
                (_, Some(e)) => {
                    let _ = writeln!(out, "eigenvector        error: {}", e.message);
                }
                _ => {}
            }
        }
    }
    if let Some(r) = &c.eigenvector.result {
        if c.comparison.is_some() {
            let _ = writeln!(out, "lambda_max         {:.4}", r.dominant_eigenvalue);
        }
    }
    out
}

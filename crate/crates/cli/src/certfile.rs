//! Plain-text certificate files: `key = value` metadata, then one graphon
//! block per kernel in the text format the library parses. Persisted
//! certificates outlive the binary and can be rechecked by an independent
//! implementation.

use anyhow::{anyhow, bail, Context, Result};
use graphnorm::density::EdgeAssignment;
use graphnorm::graph::Graph;
use graphnorm::norming::{HolderCertificate, LemmaCertificate};
use graphnorm::StepGraphon64;

#[derive(Debug)]
pub enum Certificate {
    Lemma {
        graph: Graph,
        cert: LemmaCertificate<f64>,
        threshold: f64,
    },
    Holder {
        graph: Graph,
        cert: HolderCertificate<f64>,
        threshold: f64,
    },
}

pub fn emit_lemma(graph: &Graph, cert: &LemmaCertificate<f64>, threshold: f64) -> String {
    let mut out = String::from("# graphnorm certificate: unequal edge-deleted densities\n");
    out.push_str(&format!("kind = lemma\ngraph6 = {}\n", graph.to_graph6()));
    out.push_str(&format!("threshold = {threshold}\n"));
    out.push_str(&format!("edge_lo = {}\nedge_hi = {}\n", cert.edge_lo, cert.edge_hi));
    out.push_str(&format!("t_lo = {}\nt_hi = {}\ngap = {}\n", cert.t_lo, cert.t_hi, cert.gap));
    out.push_str("kernel:\n");
    out.push_str(&cert.kernel.emit());
    out
}

pub fn emit_holder(graph: &Graph, cert: &HolderCertificate<f64>, threshold: f64) -> String {
    let mut out = String::from("# graphnorm certificate: Hölder inequality violation\n");
    out.push_str(&format!("kind = holder\ngraph6 = {}\n", graph.to_graph6()));
    out.push_str(&format!("threshold = {threshold}\n"));
    out.push_str(&format!(
        "lhs = {}\nrhs = {}\nviolation = {}\n",
        cert.lhs, cert.rhs, cert.violation
    ));
    out.push_str(&format!("kernels = {}\n", cert.assignment.kernels().len()));
    for (slot, kernel) in cert.assignment.kernels().iter().enumerate() {
        out.push_str(&format!("kernel {slot}:\n"));
        out.push_str(&kernel.emit());
    }
    out
}

pub fn parse(text: &str) -> Result<Certificate> {
    let mut fields = std::collections::HashMap::new();
    let mut lines = text.lines().enumerate().peekable();
    let mut kernel_starts = Vec::new();
    while let Some(&(num, raw)) = lines.peek() {
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            lines.next();
            continue;
        }
        if content == "kernel:" || (content.starts_with("kernel ") && content.ends_with(':')) {
            lines.next();
            kernel_starts.push(num + 1);
            // Skip the graphon block: q + 2 content lines (count, weights,
            // q matrix rows), tolerating interleaved comments.
            let mut content_lines = 0usize;
            let mut q = None::<usize>;
            while let Some(&(_, raw)) = lines.peek() {
                let inner = raw.split('#').next().unwrap_or("").trim();
                lines.next();
                if inner.is_empty() {
                    continue;
                }
                content_lines += 1;
                if content_lines == 1 {
                    q = Some(inner.parse().map_err(|_| {
                        anyhow!("line {}: kernel block needs a block count", num + 2)
                    })?);
                }
                if content_lines == q.expect("set on first content line") + 2 {
                    break;
                }
            }
            if q.is_none() {
                bail!("line {}: kernel block truncated", num + 1);
            }
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| anyhow!("line {}: expected 'key = value', got {content:?}", num + 1))?;
        fields.insert(key.trim().to_string(), value.trim().to_string());
        lines.next();
    }

    let get = |key: &str| {
        fields
            .get(key)
            .ok_or_else(|| anyhow!("certificate is missing the {key:?} field"))
    };
    let number = |key: &str| -> Result<f64> {
        get(key)?
            .parse()
            .with_context(|| format!("field {key:?} is not a number"))
    };
    let graph = Graph::from_graph6(get("graph6")?).context("graph6 field")?;
    let threshold = number("threshold").unwrap_or(graphnorm::tol::VIOLATION);

    // Re-parse the kernel blocks with the library parser, taking each
    // block's own line span.
    let all_lines: Vec<&str> = text.lines().collect();
    let kernels: Vec<StepGraphon64> = kernel_starts
        .iter()
        .map(|&start| {
            let block: String = all_lines[start..]
                .iter()
                .map(|l| format!("{l}\n"))
                .collect();
            StepGraphon64::parse(&trim_to_block(&block))
                .map_err(|e| anyhow!("kernel block at line {}: {e}", start + 1))
        })
        .collect::<Result<_>>()?;

    match get("kind")?.as_str() {
        "lemma" => {
            let kernel = kernels
                .into_iter()
                .next()
                .ok_or_else(|| anyhow!("lemma certificate needs one kernel block"))?;
            Ok(Certificate::Lemma {
                cert: LemmaCertificate {
                    kernel,
                    edge_lo: number("edge_lo")? as usize,
                    edge_hi: number("edge_hi")? as usize,
                    t_lo: number("t_lo")?,
                    t_hi: number("t_hi")?,
                    gap: number("gap")?,
                },
                graph,
                threshold,
            })
        }
        "holder" => {
            let declared = number("kernels")? as usize;
            if kernels.len() != declared {
                bail!(
                    "certificate declares {declared} kernels but contains {}",
                    kernels.len()
                );
            }
            let assignment = EdgeAssignment::new(graph.clone(), kernels)
                .map_err(|e| anyhow!("kernel blocks do not fit the graph: {e}"))?;
            Ok(Certificate::Holder {
                cert: HolderCertificate {
                    assignment,
                    lhs: number("lhs")?,
                    rhs: number("rhs")?,
                    violation: number("violation")?,
                },
                graph,
                threshold,
            })
        }
        other => bail!("unknown certificate kind {other:?}"),
    }
}

/// Cuts a text that begins with a graphon block down to exactly that
/// block, so trailing metadata or further blocks do not confuse the
/// parser.
fn trim_to_block(text: &str) -> String {
    let mut lines = text.lines();
    let mut out = String::new();
    let mut q = None::<usize>;
    let mut taken = 0usize;
    for line in lines.by_ref() {
        let content = line.split('#').next().unwrap_or("").trim();
        out.push_str(line);
        out.push('\n');
        if content.is_empty() {
            continue;
        }
        taken += 1;
        match q {
            None => match content.parse() {
                Ok(count) => q = Some(count),
                // Let the library parser report the malformed count.
                Err(_) => return out,
            },
            Some(count) if taken == count + 2 => break,
            Some(_) => {}
        }
    }
    out
}

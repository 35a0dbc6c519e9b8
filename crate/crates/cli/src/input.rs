//! Graph and graphon loading shared by the subcommands.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, ValueEnum};
use graphnorm::graph::Graph;
use graphnorm::{catalog, StepGraphon64};
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphFormat {
    Auto,
    Graph6,
    Edges,
}

/// One graph from a catalog name, an inline graph6 string, or a file.
#[derive(Debug, Args)]
pub struct GraphInput {
    /// Catalog name, e.g. P4, C6, star_3, K_3_3, Q3, torus_6_6.
    #[arg(long, conflicts_with_all = ["graph6", "file"])]
    pub name: Option<String>,
    /// Inline graph6 text.
    #[arg(long, conflicts_with = "file")]
    pub graph6: Option<String>,
    /// Path to a graph6 line or an edge-list file (`u v` per line).
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// File format; `auto` sniffs edge lists by their digit-only tokens.
    #[arg(long, value_enum, default_value_t = GraphFormat::Auto)]
    pub format: GraphFormat,
}

impl GraphInput {
    pub fn load(&self) -> Result<(String, Graph)> {
        if let Some(name) = &self.name {
            let entry = catalog::build(name)
                .ok_or_else(|| anyhow!("unknown catalog name {name:?} (try `catalog list`)"))?;
            return Ok((entry.name, entry.graph));
        }
        if let Some(text) = &self.graph6 {
            let graph = Graph::from_graph6(text).context("parsing --graph6")?;
            return Ok((text.clone(), graph));
        }
        if let Some(path) = &self.file {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let graph = match self.format {
                GraphFormat::Graph6 => Graph::from_graph6(&text)?,
                GraphFormat::Edges => Graph::from_edge_list(&text)?,
                GraphFormat::Auto => {
                    if looks_like_edge_list(&text) {
                        Graph::from_edge_list(&text)?
                    } else {
                        Graph::from_graph6(&text)?
                    }
                }
            };
            return Ok((path.display().to_string(), graph));
        }
        bail!("no graph given: use --name, --graph6, or --file");
    }
}

fn looks_like_edge_list(text: &str) -> bool {
    let mut saw_pair = false;
    for raw in text.lines() {
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.len() != 2 || !tokens.iter().all(|t| t.chars().all(|c| c.is_ascii_digit())) {
            return false;
        }
        saw_pair = true;
    }
    saw_pair
}

pub fn load_graphon(path: &PathBuf) -> Result<StepGraphon64> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    StepGraphon64::parse(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

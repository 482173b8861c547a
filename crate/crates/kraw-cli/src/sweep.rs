//! Grid sweeps rendered as CSV with a `#` metadata header.

use std::io::Write;
use std::ops::RangeInclusive;

use num_rational::BigRational;
use rayon::prelude::*;

use krawtchouk::exact::{format_sig, to_exact_decimal};
use krawtchouk::metric::normalized_error;
use krawtchouk::regions::eval_region_id;
use krawtchouk::state::corner_coords;
use krawtchouk::{classify, ExactTable, Params, RegionId, RegionTag};

use crate::config::Settings;
use crate::error::{CliError, CliResult};

/// One sweep over a block of the `(x, n)` grid.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub params: Params,
    pub q_text: String,
    pub n: RangeInclusive<usize>,
    pub x: RangeInclusive<usize>,
    /// Evaluate this formula everywhere instead of the classified one.
    pub region: Option<RegionTag>,
    pub settings: Settings,
    pub digits: usize,
}

impl SweepSpec {
    pub fn new(big_n: usize, q: &str, settings: Settings) -> CliResult<Self> {
        let params = Params::from_q_str(big_n, q)?;
        Ok(SweepSpec {
            params,
            q_text: q.trim().to_string(),
            n: 0..=big_n,
            x: 0..=big_n,
            region: None,
            settings,
            digits: 30,
        })
    }

    pub fn validate(&self) -> CliResult<()> {
        let big_n = self.params.big_n;
        for (name, r) in [("n", &self.n), ("x", &self.x)] {
            if r.start() > r.end() || *r.end() > big_n {
                return Err(CliError::Usage(format!(
                    "{name} range {}:{} must be ordered and inside [0, {big_n}]",
                    r.start(),
                    r.end()
                )));
            }
        }
        self.settings.classifier.validate()?;
        Ok(())
    }

    fn points(&self) -> Vec<(usize, usize)> {
        self.n.clone().flat_map(|n| self.x.clone().map(move |x| (x, n))).collect()
    }

    /// Header lines shared by every command.
    pub fn metadata(&self, command: &str) -> Vec<String> {
        let p = &self.params;
        let c = &self.settings.classifier;
        let mut m = vec![
            format!("# kraw {} {command}", env!("CARGO_PKG_VERSION")),
            format!(
                "# N = {}, q = {}, p = {}, eps = {}",
                p.big_n,
                self.q_text,
                to_exact_decimal(&p.p).unwrap_or_else(|| p.p.to_string()),
                p.eps()
            ),
            format!("# n = {}:{}, x = {}:{}", self.n.start(), self.n.end(), self.x.start(), self.x.end()),
            format!(
                "# n_small = {}, x_small = {}, j_small = {}, corner_width = {}, beta_max = {}",
                c.n_small, c.x_small, c.j_small, c.corner_width, c.beta_max
            ),
        ];
        if let Some(r) = self.region {
            m.push(format!("# region = {r} (forced)"));
        }
        if self.n.start() == self.n.end() && *self.n.start() > 0 {
            let u = corner_coords(0, *self.n.start(), &p.shape()).u;
            m.push(format!("# u = {u:.6}"));
        }
        m
    }
}

/// A CSV table: metadata comments, a header row and data rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub metadata: Vec<String>,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn write(&self, out: &mut dyn Write) -> std::io::Result<()> {
        for m in &self.metadata {
            writeln!(out, "{m}")?;
        }
        writeln!(out, "{}", self.header.join(","))?;
        for r in &self.rows {
            writeln!(out, "{}", r.join(","))?;
        }
        Ok(())
    }

    pub fn to_string_lossy(&self) -> String {
        let mut buf = Vec::new();
        self.write(&mut buf).expect("writing to memory");
        String::from_utf8_lossy(&buf).into_owned()
    }
}

/// Exact decimal when it terminates within `digits` significant digits,
/// scientific notation otherwise.
pub fn render_exact(r: &BigRational, digits: usize) -> String {
    if let Some(s) = to_exact_decimal(r) {
        let significant = s.trim_start_matches('-').replace('.', "");
        if significant.trim_start_matches('0').trim_end_matches('0').len() <= digits {
            return s;
        }
    }
    format_sig(r, digits)
}

fn real(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.10e}")
    } else {
        format!("{v}")
    }
}

pub fn cmd_eval(spec: &SweepSpec) -> CliResult<Table> {
    spec.validate()?;
    let table = ExactTable::build(&spec.params);
    let big_n = spec.params.big_n;
    let rows = spec
        .points()
        .par_iter()
        .map(|&(x, n)| vec![x.to_string(), n.to_string(), big_n.to_string(), render_exact(&table.get(n, x), spec.digits)])
        .collect();
    Ok(Table { metadata: spec.metadata("eval"), header: vec!["x", "n", "N", "value"], rows })
}

pub const COMPARE_HEADER: [&str; 11] = [
    "x",
    "n",
    "N",
    "region",
    "mirrored",
    "exact_sign",
    "exact_ln_mag",
    "approx_sign",
    "approx_ln_mag",
    "norm_err",
    "im_residue",
];

pub fn cmd_compare(spec: &SweepSpec) -> CliResult<Table> {
    spec.validate()?;
    let table = ExactTable::build(&spec.params);
    let sh = spec.params.shape();
    let cfg = spec.settings.classifier;
    let big_n = spec.params.big_n;
    let rows = spec
        .points()
        .par_iter()
        .map(|&(x, n)| {
            let id = match spec.region {
                Some(tag) => RegionId { tag, mirrored: false },
                None => classify(x, n, &sh, &cfg),
            };
            let mut row = vec![
                x.to_string(),
                n.to_string(),
                big_n.to_string(),
                id.tag.to_string(),
                id.mirrored.to_string(),
                table.sign(n, x).to_string(),
                real(table.ln_abs(n, x)),
            ];
            match eval_region_id(id, x, n, &sh) {
                Ok(v) => row.extend([
                    v.sign().to_string(),
                    real(v.ln_abs()),
                    real(normalized_error(&v, &table, n, x)),
                    real(v.im_residue),
                ]),
                Err(_) => row.extend(["", "", "", ""].map(String::from)),
            }
            row
        })
        .collect();
    Ok(Table { metadata: spec.metadata("compare"), header: COMPARE_HEADER.to_vec(), rows })
}

pub fn cmd_regions(spec: &SweepSpec) -> CliResult<Table> {
    spec.validate()?;
    let sh = spec.params.shape();
    let cfg = spec.settings.classifier;
    let rows = spec
        .points()
        .par_iter()
        .map(|&(x, n)| {
            let id = classify(x, n, &sh, &cfg);
            vec![x.to_string(), n.to_string(), id.tag.to_string(), id.mirrored.to_string()]
        })
        .collect();
    Ok(Table { metadata: spec.metadata("regions"), header: vec!["x", "n", "region", "mirrored"], rows })
}

/// The comparison of one figure: its formula over the whole row `n`.
pub fn cmd_figure(id: u8, settings: Settings) -> CliResult<Table> {
    let fig = crate::figures::figure(id)?;
    let mut spec = SweepSpec::new(fig.big_n, fig.q, settings)?;
    spec.n = fig.n..=fig.n;
    spec.region = Some(fig.region);
    let mut t = cmd_compare(&spec)?;
    t.metadata.insert(1, format!("# figure {id}, region {}", fig.region));
    Ok(t)
}

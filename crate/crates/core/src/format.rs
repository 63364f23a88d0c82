//! Line-oriented instance text format.
//!
//! ```text
//! # comment
//! [domain]
//! a b c d
//! [groups]
//! g1: a b
//! g2: b c d
//! [hypotheses]
//! h1: +1 -1 -1 +1
//! blk: fixed: a=+1,b=-1 free: c,d
//! [mass]
//! a 0.25
//! ...
//! [target]
//! a +1
//! ...
//! [sample]
//! a +1
//! ```
//!
//! Explicit hypotheses list one label per domain point in domain order.
//! Blocks list pinned points and free points; together they must cover the
//! domain exactly once. `[label-probabilities]` (probability of +1 per point)
//! may replace `[target]` for non-realizable fixtures. `[mass]`, `[target]`
//! and `[sample]` are optional; `[domain]`, `[groups]` and `[hypotheses]` are
//! required. Serialization is canonical: sections in the order above, points
//! in domain order, numbers in shortest round-trip form.

use std::fmt;

use crate::error::{Error, Result};
use crate::instance::{
    check_parts, FiniteDomain, FiniteInstance, Group, GroupFamily, Hypothesis, HypothesisClass, HypothesisValues,
    Label, LabeledSample, Target,
};

#[derive(Clone, Debug, PartialEq)]
pub struct InstanceFile {
    pub domain: FiniteDomain,
    pub groups: GroupFamily,
    pub hypotheses: HypothesisClass,
    pub mass: Option<Vec<f64>>,
    pub target: Option<Target>,
    pub sample: Option<LabeledSample>,
}

impl InstanceFile {
    pub fn from_instance(inst: &FiniteInstance) -> Self {
        InstanceFile {
            domain: inst.domain.clone(),
            groups: inst.groups.clone(),
            hypotheses: inst.hypotheses.clone(),
            mass: Some(inst.mass.clone()),
            target: Some(inst.target.clone()),
            sample: None,
        }
    }

    /// A full instance; needs both the mass table and a target.
    pub fn instance(&self) -> Result<FiniteInstance> {
        let mass = self
            .mass
            .clone()
            .ok_or_else(|| Error::invalid("instance file has no [mass] section"))?;
        let target = self
            .target
            .clone()
            .ok_or_else(|| Error::invalid("instance file has no [target] or [label-probabilities] section"))?;
        FiniteInstance::new(
            self.domain.clone(),
            self.groups.clone(),
            self.hypotheses.clone(),
            mass,
            target,
        )
    }

    pub fn parse(text: &str) -> Result<Self> {
        Parser::default().run(text)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Section {
    Domain,
    Groups,
    Hypotheses,
    Mass,
    Target,
    LabelProbabilities,
    Sample,
}

impl Section {
    fn from_header(h: &str) -> Option<Section> {
        Some(match h {
            "domain" => Section::Domain,
            "groups" => Section::Groups,
            "hypotheses" => Section::Hypotheses,
            "mass" => Section::Mass,
            "target" => Section::Target,
            "label-probabilities" => Section::LabelProbabilities,
            "sample" => Section::Sample,
            _ => return None,
        })
    }
}

#[derive(Default)]
struct Parser {
    points: Vec<String>,
    domain: Option<FiniteDomain>,
    groups: Vec<Group>,
    hypotheses: Vec<Hypothesis>,
    mass: Option<Vec<Option<f64>>>,
    labels: Option<Vec<Option<Label>>>,
    probs: Option<Vec<Option<f64>>>,
    sample: Option<LabeledSample>,
}

fn split_id(line: &str, lineno: usize) -> Result<(&str, &str)> {
    let (id, rest) = line
        .split_once(':')
        .ok_or_else(|| Error::parse(lineno, "expected `<id>: ...`"))?;
    let id = id.trim();
    if id.is_empty() || id.contains(char::is_whitespace) {
        return Err(Error::parse(lineno, format!("bad identifier `{id}`")));
    }
    Ok((id, rest.trim()))
}

fn parse_label(tok: &str, lineno: usize) -> Result<Label> {
    tok.parse()
        .map_err(|_| Error::parse(lineno, format!("`{tok}` is not a label (+1 or -1)")))
}

fn point_table<T: Copy>(
    table: &mut [Option<T>],
    domain: &FiniteDomain,
    line: &str,
    lineno: usize,
    value: impl Fn(&str) -> Result<T>,
) -> Result<()> {
    let mut toks = line.split_whitespace();
    let (Some(p), Some(v), None) = (toks.next(), toks.next(), toks.next()) else {
        return Err(Error::parse(lineno, "expected `<point> <value>`"));
    };
    let x = domain
        .index_of(p)
        .ok_or_else(|| Error::parse(lineno, format!("unknown point `{p}`")))?;
    if table[x].is_some() {
        return Err(Error::parse(lineno, format!("point `{p}` listed twice")));
    }
    table[x] = Some(value(v)?);
    Ok(())
}

fn complete<T: Copy>(table: Vec<Option<T>>, section: &str, domain: &FiniteDomain) -> Result<Vec<T>> {
    table
        .iter()
        .enumerate()
        .map(|(x, v)| v.ok_or_else(|| Error::invalid(format!("[{section}] is missing point `{}`", domain.name(x)))))
        .collect()
}

impl Parser {
    fn domain(&self, lineno: usize) -> Result<&FiniteDomain> {
        self.domain
            .as_ref()
            .ok_or_else(|| Error::parse(lineno, "[domain] must come first"))
    }

    fn run(mut self, text: &str) -> Result<InstanceFile> {
        let mut section: Option<Section> = None;
        let mut seen: Vec<Section> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(h) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                let s = Section::from_header(h.trim())
                    .ok_or_else(|| Error::parse(lineno, format!("unknown section `[{h}]`")))?;
                if seen.contains(&s) {
                    return Err(Error::parse(lineno, format!("section `[{h}]` repeated")));
                }
                if section == Some(Section::Domain) {
                    self.close_domain(lineno)?;
                }
                if s != Section::Domain && self.domain.is_none() {
                    return Err(Error::parse(lineno, "[domain] must come first"));
                }
                seen.push(s);
                section = Some(s);
                continue;
            }
            let Some(s) = section else {
                return Err(Error::parse(lineno, "content before the first section"));
            };
            self.line(s, line, lineno)?;
        }
        if section == Some(Section::Domain) {
            self.close_domain(text.lines().count())?;
        }
        self.finish(&seen)
    }

    fn close_domain(&mut self, lineno: usize) -> Result<()> {
        if self.domain.is_none() {
            let d =
                FiniteDomain::new(std::mem::take(&mut self.points)).map_err(|e| Error::parse(lineno, e.to_string()))?;
            self.domain = Some(d);
        }
        Ok(())
    }

    fn line(&mut self, s: Section, line: &str, lineno: usize) -> Result<()> {
        if s == Section::Domain {
            self.points.extend(line.split_whitespace().map(str::to_string));
            return Ok(());
        }
        let domain = self.domain(lineno)?.clone();
        let n = domain.len();
        let lookup = |p: &str| {
            domain
                .index_of(p)
                .ok_or_else(|| Error::parse(lineno, format!("unknown point `{p}`")))
        };
        match s {
            Section::Domain => unreachable!(),
            Section::Groups => {
                let (id, rest) = split_id(line, lineno)?;
                let members = rest.split_whitespace().map(lookup).collect::<Result<Vec<_>>>()?;
                self.groups.push(Group::new(id, members, n)?);
            }
            Section::Hypotheses => {
                let (id, rest) = split_id(line, lineno)?;
                let h = if let Some(body) = rest.strip_prefix("fixed:") {
                    let (fixed_part, free_part) = match body.split_once("free:") {
                        Some((f, r)) => (f, r),
                        None => (body, ""),
                    };
                    let mut values: Vec<Option<Label>> = vec![None; n];
                    let mut covered = vec![false; n];
                    for item in fixed_part.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                        let (p, v) = item
                            .split_once('=')
                            .ok_or_else(|| Error::parse(lineno, format!("expected `point=label`, got `{item}`")))?;
                        let x = lookup(p.trim())?;
                        if covered[x] {
                            return Err(Error::parse(lineno, format!("point `{}` listed twice", p.trim())));
                        }
                        covered[x] = true;
                        values[x] = Some(parse_label(v.trim(), lineno)?);
                    }
                    for p in free_part.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                        let x = lookup(p)?;
                        if covered[x] {
                            return Err(Error::parse(lineno, format!("point `{p}` listed twice")));
                        }
                        covered[x] = true;
                    }
                    if let Some(x) = covered.iter().position(|c| !c) {
                        return Err(Error::parse(
                            lineno,
                            format!("block `{id}` does not cover point `{}`", domain.name(x)),
                        ));
                    }
                    Hypothesis::block(id, values)
                } else {
                    let values = rest
                        .split_whitespace()
                        .map(|t| parse_label(t, lineno))
                        .collect::<Result<Vec<_>>>()?;
                    if values.len() != n {
                        return Err(Error::parse(
                            lineno,
                            format!("hypothesis `{id}` has {} labels, domain has {n}", values.len()),
                        ));
                    }
                    Hypothesis::explicit(id, values)
                };
                self.hypotheses.push(h);
            }
            Section::Mass => {
                let table = self.mass.get_or_insert_with(|| vec![None; n]);
                point_table(table, &domain, line, lineno, |v| {
                    v.parse::<f64>()
                        .map_err(|_| Error::parse(lineno, format!("bad mass `{v}`")))
                })?;
            }
            Section::Target => {
                let table = self.labels.get_or_insert_with(|| vec![None; n]);
                point_table(table, &domain, line, lineno, |v| parse_label(v, lineno))?;
            }
            Section::LabelProbabilities => {
                let table = self.probs.get_or_insert_with(|| vec![None; n]);
                point_table(table, &domain, line, lineno, |v| {
                    v.parse::<f64>()
                        .map_err(|_| Error::parse(lineno, format!("bad probability `{v}`")))
                })?;
            }
            Section::Sample => {
                let sample = self.sample.get_or_insert_with(LabeledSample::default);
                let (x, y) = sample_line(&domain, line, lineno)?;
                sample.push(x, y);
            }
        }
        Ok(())
    }

    fn finish(self, seen: &[Section]) -> Result<InstanceFile> {
        for required in [Section::Domain, Section::Groups, Section::Hypotheses] {
            if !seen.contains(&required) {
                return Err(Error::invalid(format!("missing section {required:?}")));
            }
        }
        if seen.contains(&Section::Target) && seen.contains(&Section::LabelProbabilities) {
            return Err(Error::invalid("[target] and [label-probabilities] are exclusive"));
        }
        let domain = self.domain.expect("domain section closed");
        let n = domain.len();
        let groups = GroupFamily::new(self.groups)?;
        let hypotheses = HypothesisClass::new(self.hypotheses)?;
        check_parts(&domain, &groups, &hypotheses)?;
        let mass = match (seen.contains(&Section::Mass), self.mass) {
            (true, Some(t)) => Some(complete(t, "mass", &domain)?),
            (true, None) => Some(complete(vec![None; n], "mass", &domain)?),
            _ => None,
        };
        let target = if seen.contains(&Section::Target) {
            let t = self.labels.unwrap_or_else(|| vec![None; n]);
            Some(Target::Deterministic(complete(t, "target", &domain)?))
        } else if seen.contains(&Section::LabelProbabilities) {
            let t = self.probs.unwrap_or_else(|| vec![None; n]);
            Some(Target::Probabilistic(complete(t, "label-probabilities", &domain)?))
        } else {
            None
        };
        let sample = if seen.contains(&Section::Sample) {
            Some(self.sample.unwrap_or_default())
        } else {
            None
        };
        Ok(InstanceFile {
            domain,
            groups,
            hypotheses,
            mass,
            target,
            sample,
        })
    }
}

fn sample_line(domain: &FiniteDomain, line: &str, lineno: usize) -> Result<(usize, Label)> {
    let mut toks = line.split_whitespace();
    let (Some(p), Some(v), None) = (toks.next(), toks.next(), toks.next()) else {
        return Err(Error::parse(lineno, "expected `<point> <label>`"));
    };
    let x = domain
        .index_of(p)
        .ok_or_else(|| Error::parse(lineno, format!("unknown point `{p}`")))?;
    Ok((x, parse_label(v, lineno)?))
}

/// Parses a standalone sample: one `<point> <label>` per line, with an
/// optional `[sample]` header.
pub fn parse_sample(text: &str, domain: &FiniteDomain) -> Result<LabeledSample> {
    let mut sample = LabeledSample::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() || line == "[sample]" {
            continue;
        }
        let (x, y) = sample_line(domain, line, i + 1)?;
        sample.push(x, y);
    }
    Ok(sample)
}

pub fn write_sample(sample: &LabeledSample, domain: &FiniteDomain) -> String {
    let mut out = String::from("[sample]\n");
    for &(x, y) in sample.examples() {
        out.push_str(&format!("{} {y}\n", domain.name(x)));
    }
    out
}

impl fmt::Display for InstanceFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = &self.domain;
        writeln!(f, "[domain]")?;
        writeln!(f, "{}", d.names().join(" "))?;
        writeln!(f, "[groups]")?;
        for g in self.groups.iter() {
            write!(f, "{}:", g.id())?;
            for &x in g.members() {
                write!(f, " {}", d.name(x))?;
            }
            writeln!(f)?;
        }
        writeln!(f, "[hypotheses]")?;
        for h in self.hypotheses.iter() {
            match h.values() {
                HypothesisValues::Explicit(v) => {
                    write!(f, "{}:", h.id())?;
                    for l in v {
                        write!(f, " {l}")?;
                    }
                    writeln!(f)?;
                }
                HypothesisValues::Block(v) => {
                    let fixed: Vec<String> = v
                        .iter()
                        .enumerate()
                        .filter_map(|(x, l)| l.map(|l| format!("{}={l}", d.name(x))))
                        .collect();
                    let free: Vec<&str> = v
                        .iter()
                        .enumerate()
                        .filter(|(_, l)| l.is_none())
                        .map(|(x, _)| d.name(x))
                        .collect();
                    writeln!(f, "{}: fixed: {} free: {}", h.id(), fixed.join(","), free.join(","))?;
                }
            }
        }
        if let Some(mass) = &self.mass {
            writeln!(f, "[mass]")?;
            for (x, m) in mass.iter().enumerate() {
                writeln!(f, "{} {m}", d.name(x))?;
            }
        }
        match &self.target {
            Some(Target::Deterministic(t)) => {
                writeln!(f, "[target]")?;
                for (x, l) in t.iter().enumerate() {
                    writeln!(f, "{} {l}", d.name(x))?;
                }
            }
            Some(Target::Probabilistic(p)) => {
                writeln!(f, "[label-probabilities]")?;
                for (x, q) in p.iter().enumerate() {
                    writeln!(f, "{} {q}", d.name(x))?;
                }
            }
            None => {}
        }
        if let Some(s) = &self.sample {
            f.write_str(&write_sample(s, d))?;
        }
        Ok(())
    }
}

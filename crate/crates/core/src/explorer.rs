//! Driving the step relation: scheduled runs, exhaustive reduction graphs,
//! outcome sets, and DOT / JSON-lines export.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::semantics::{successors, Configuration, StuckInfo};
use crate::syntax::{pretty, Value};

pub const DEFAULT_MAX_STEPS: usize = 10_000;
pub const DEFAULT_MAX_STATES: usize = 50_000;
pub const DEFAULT_MAX_DEPTH: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Schedule {
    /// Always the first successor: leftmost `par` side preferred.
    First,
    /// Uniform choice from a generator seeded with the given value.
    Random(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Terminated(Value),
    Stuck(StuckInfo),
    BudgetExceeded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub origin: Configuration,
    /// Label of each step and the configuration it produced.
    pub steps: Vec<(String, Configuration)>,
    pub status: Status,
}

impl Trace {
    pub fn last(&self) -> &Configuration {
        self.steps.last().map_or(&self.origin, |(_, c)| c)
    }

    pub fn configurations(&self) -> impl Iterator<Item = &Configuration> {
        std::iter::once(&self.origin).chain(self.steps.iter().map(|(_, c)| c))
    }
}

pub fn run(c0: Configuration, schedule: Schedule, max_steps: usize) -> Trace {
    let mut rng = match schedule {
        Schedule::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        Schedule::First => None,
    };
    let mut steps = Vec::new();
    let mut cur = c0.clone();
    let status = loop {
        if let Some(v) = cur.stmt.as_value() {
            break Status::Terminated(v);
        }
        let succ = successors(&cur);
        if succ.steps.is_empty() {
            break Status::Stuck(succ.stuck.expect("non-terminal without successors is stuck"));
        }
        if steps.len() >= max_steps {
            break Status::BudgetExceeded;
        }
        let i = match rng.as_mut() {
            Some(r) => r.gen_range(0..succ.steps.len()),
            None => 0,
        };
        let step = succ.steps.into_iter().nth(i).expect("index in range");
        let label = step.label();
        cur = step.next.clone();
        steps.push((label, step.next));
    };
    Trace {
        origin: c0,
        steps,
        status,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub from: usize,
    pub label: String,
    pub to: usize,
}

#[derive(Clone, Debug)]
pub struct ReductionGraph {
    /// Discovery order; index 0 is the root.
    pub nodes: Vec<Configuration>,
    pub edges: Vec<Edge>,
    /// Stuck diagnosis for each stuck leaf.
    pub stuck: HashMap<usize, StuckInfo>,
    pub truncated: bool,
    index: HashMap<Configuration, usize>,
}

impl ReductionGraph {
    pub fn root(&self) -> &Configuration {
        &self.nodes[0]
    }

    pub fn index_of(&self, c: &Configuration) -> Option<usize> {
        self.index.get(c).copied()
    }

    pub fn out_edges(&self, n: usize) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.from == n)
    }

    /// Number of distinct root-to-leaf paths; `None` when the graph has a cycle.
    pub fn maximal_paths(&self) -> Option<u128> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            adj[e.from].push(e.to);
        }
        // 0 = unvisited, 1 = on stack, 2 = done
        fn count(n: usize, adj: &[Vec<usize>], mark: &mut [u8], memo: &mut [u128]) -> Option<u128> {
            match mark[n] {
                1 => return None,
                2 => return Some(memo[n]),
                _ => {}
            }
            mark[n] = 1;
            let mut total = 0u128;
            for &m in &adj[n] {
                total += count(m, adj, mark, memo)?;
            }
            if adj[n].is_empty() {
                total = 1;
            }
            mark[n] = 2;
            memo[n] = total;
            Some(total)
        }
        let mut mark = vec![0u8; self.nodes.len()];
        let mut memo = vec![0u128; self.nodes.len()];
        count(0, &adj, &mut mark, &mut memo)
    }
}

/// Breadth-first closure of `successors` from `c0`.
///
/// Configurations are identified structurally, so loops that revisit a
/// state become cycles. Expansion stops at `max_states` distinct nodes or
/// below `max_depth`, setting `truncated`.
pub fn explore(c0: Configuration, max_states: usize, max_depth: usize) -> ReductionGraph {
    let mut g = ReductionGraph {
        nodes: vec![c0.clone()],
        edges: Vec::new(),
        stuck: HashMap::new(),
        truncated: false,
        index: HashMap::from([(c0, 0)]),
    };
    let mut seen_edges: HashSet<Edge> = HashSet::new();
    let mut queue = VecDeque::from([(0usize, 0usize)]);
    while let Some((n, depth)) = queue.pop_front() {
        let succ = successors(&g.nodes[n]);
        if let Some(info) = succ.stuck {
            g.stuck.insert(n, info);
            continue;
        }
        if succ.steps.is_empty() {
            continue;
        }
        if depth >= max_depth {
            g.truncated = true;
            continue;
        }
        for step in succ.steps {
            let label = step.label();
            let to = match g.index.get(&step.next) {
                Some(&i) => i,
                None => {
                    if g.nodes.len() >= max_states {
                        g.truncated = true;
                        continue;
                    }
                    let i = g.nodes.len();
                    g.index.insert(step.next.clone(), i);
                    g.nodes.push(step.next);
                    queue.push_back((i, depth + 1));
                    i
                }
            };
            let e = Edge { from: n, label, to };
            if seen_edges.insert(e.clone()) {
                g.edges.push(e);
            }
        }
    }
    g
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutcomeSet {
    /// Final value and rendered store of each terminal leaf.
    pub terminals: BTreeSet<(Value, String)>,
    pub stuck: BTreeSet<StuckInfo>,
    pub complete: bool,
}

pub fn outcomes(g: &ReductionGraph) -> OutcomeSet {
    let terminals = g
        .nodes
        .iter()
        .filter_map(|c| c.stmt.as_value().map(|v| (v, c.store.to_string())))
        .collect();
    OutcomeSet {
        terminals,
        stuck: g.stuck.values().cloned().collect(),
        complete: !g.truncated,
    }
}

impl OutcomeSet {
    /// One line per outcome, then the completeness flag.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for (v, store) in &self.terminals {
            let _ = writeln!(s, "terminated {v} {store}");
        }
        for info in &self.stuck {
            let _ = writeln!(s, "{info}");
        }
        let _ = writeln!(s, "complete: {}", self.complete);
        s
    }
}

fn dot_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out
}

pub fn to_dot(g: &ReductionGraph) -> String {
    let mut s = String::from("digraph reduction {\n");
    for (i, c) in g.nodes.iter().enumerate() {
        let label = format!("{}\n{}", pretty(&c.stmt), c.store);
        let style = if i == 0 { ", style=bold" } else { "" };
        let _ = writeln!(s, "  n{i} [label=\"{}\"{style}];", dot_escape(&label));
    }
    for e in &g.edges {
        let _ = writeln!(s, "  n{} -> n{} [label=\"{}\"];", e.from, e.to, dot_escape(&e.label));
    }
    s.push_str("}\n");
    s
}

#[derive(Serialize)]
struct StepLine<'a> {
    step: usize,
    rule: &'a str,
    stmt: String,
    store: String,
    procs: String,
}

#[derive(Serialize)]
struct StatusLine {
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    redex: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
    steps: usize,
}

/// One JSON object per step, then a status line.
pub fn to_json_trace(t: &Trace) -> String {
    let mut out = String::new();
    for (i, (rule, c)) in t.steps.iter().enumerate() {
        let line = StepLine {
            step: i + 1,
            rule,
            stmt: pretty(&c.stmt),
            store: c.store.to_string(),
            procs: c.procs.to_string(),
        };
        out.push_str(&serde_json::to_string(&line).expect("serializable"));
        out.push('\n');
    }
    let mut status = StatusLine {
        status: "",
        value: None,
        redex: None,
        reason: None,
        steps: t.steps.len(),
    };
    match &t.status {
        Status::Terminated(v) => {
            status.status = "terminated";
            status.value = Some(v.to_string());
        }
        Status::Stuck(info) => {
            status.status = "stuck";
            status.redex = Some(info.redex.clone());
            status.reason = Some(info.reason.to_string());
        }
        Status::BudgetExceeded => status.status = "budget_exceeded",
    }
    out.push_str(&serde_json::to_string(&status).expect("serializable"));
    out.push('\n');
    out
}

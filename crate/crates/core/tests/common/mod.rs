//! Independent reference implementations and random generators shared by
//! the integration tests. Nothing here calls the search or evaluation code
//! under test; games are described by plain vectors and evaluated directly.
#![allow(dead_code)]

use std::collections::BTreeSet;

use lsat::game::{Assignment, Capacity, GameConfig, GameSpec, Multiplicity};
use lsat::logic::{ExpressionSet, Implication, Literal};
use lsat::program::{BoolExpr, CmpOp, FunctionKind, NumExpr, Who};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

/// One participant's position, `None` when unplaced.
pub type Placement = Vec<Option<usize>>;

/// A game in plain terms.
#[derive(Debug, Clone)]
pub struct Game {
    pub participants: Vec<String>,
    pub positions: Vec<String>,
    pub ordered: bool,
    pub at_most_one: bool,
    /// `(min, max)` per position.
    pub caps: Vec<(usize, usize)>,
}

impl Game {
    pub fn config(&self) -> GameConfig {
        let mut spec = GameSpec::new(self.participants.clone(), self.positions.clone()).ordered(self.ordered);
        if self.at_most_one {
            spec = spec.multiplicity(Multiplicity::AtMostOne);
        }
        let caps = self.caps.iter().map(|&(min, max)| Capacity { min, max }).collect();
        spec.capacities(caps).build().expect("generated game is valid")
    }

    fn p(&self, name: &str) -> usize {
        self.participants
            .iter()
            .position(|n| n == name)
            .expect("known participant")
    }

    fn q(&self, name: &str) -> usize {
        self.positions.iter().position(|n| n == name).expect("known position")
    }
}

/// Every placement meeting the capacity bounds, by plain counting.
pub fn all_placements(g: &Game) -> Vec<Placement> {
    let mut domain: Vec<Option<usize>> = (0..g.positions.len()).map(Some).collect();
    if g.at_most_one {
        domain.push(None);
    }
    let mut out: Vec<Placement> = vec![vec![]];
    for _ in &g.participants {
        out = out
            .into_iter()
            .flat_map(|pl| {
                domain.iter().map(move |&d| {
                    let mut next = pl.clone();
                    next.push(d);
                    next
                })
            })
            .collect();
    }
    out.retain(|pl| {
        g.caps.iter().enumerate().all(|(r, &(min, max))| {
            let n = pl.iter().filter(|&&x| x == Some(r)).count();
            min <= n && n <= max
        })
    });
    out
}

/// Placements satisfying every program, under [`holds`].
pub fn oracle_solutions(g: &Game, programs: &[BoolExpr]) -> BTreeSet<Placement> {
    all_placements(g)
        .into_iter()
        .filter(|pl| programs.iter().all(|e| holds(g, pl, e)))
        .collect()
}

/// Reads a complete grid back into a placement.
pub fn placement_of(a: &Assignment) -> Placement {
    assert!(a.is_complete(), "assignment not complete:\n{a}");
    (0..a.cols()).map(|p| a.position_of(p)).collect()
}

/// The grid of a placement, built cell by cell.
pub fn grid_cells(g: &Game, pl: &Placement) -> Vec<(usize, usize, bool)> {
    let mut cells = Vec::new();
    for (p, at) in pl.iter().enumerate() {
        for r in 0..g.positions.len() {
            cells.push((p, r, *at == Some(r)));
        }
    }
    cells
}

// Direct semantics on a complete placement. `None` numbers are absent
// (unplaced participant, no unique extreme, empty MAX); every comparison
// involving an absent number is false.

fn who(g: &Game, pl: &Placement, w: &Who) -> Option<usize> {
    let extreme = |names: &[String], highest: bool| {
        let placed: Vec<(usize, usize)> = names
            .iter()
            .map(|n| g.p(n))
            .filter_map(|p| pl[p].map(|r| (r, p)))
            .collect();
        let best = if highest {
            placed.iter().map(|x| x.0).max()
        } else {
            placed.iter().map(|x| x.0).min()
        }?;
        let at: Vec<usize> = placed.iter().filter(|x| x.0 == best).map(|x| x.1).collect();
        (at.len() == 1).then(|| at[0])
    };
    match w {
        Who::Named(n) => Some(g.p(n)),
        Who::ArgMax(ns) => extreme(ns, true),
        Who::ArgMin(ns) => extreme(ns, false),
        Who::Select(pos) => {
            let r = g.q(pos);
            let at: Vec<usize> = (0..pl.len()).filter(|&p| pl[p] == Some(r)).collect();
            (at.len() == 1).then(|| at[0])
        }
    }
}

fn slot(g: &Game, pl: &Placement, w: &Who) -> Option<i64> {
    assert!(g.ordered);
    who(g, pl, w).and_then(|p| pl[p]).map(|r| r as i64 + 1)
}

pub fn number(g: &Game, pl: &Placement, e: &NumExpr) -> Option<i64> {
    match e {
        NumExpr::Const(n) => Some(*n),
        NumExpr::Value(w) => slot(g, pl, w),
        NumExpr::Count(ns, pos) => Some(
            ns.iter()
                .filter(|n| match pos {
                    Some(q) => pl[g.p(n)] == Some(g.q(q)),
                    None => pl[g.p(n)].is_some(),
                })
                .count() as i64,
        ),
        NumExpr::Add(a, b) => Some(number(g, pl, a)? + number(g, pl, b)?),
        NumExpr::Sub(a, b) => Some(number(g, pl, a)? - number(g, pl, b)?),
        NumExpr::Max(xs) => xs
            .iter()
            .map(|x| number(g, pl, x))
            .collect::<Option<Vec<_>>>()?
            .into_iter()
            .max(),
        NumExpr::Min(xs) => xs
            .iter()
            .map(|x| number(g, pl, x))
            .collect::<Option<Vec<_>>>()?
            .into_iter()
            .min(),
    }
}

pub fn holds(g: &Game, pl: &Placement, e: &BoolExpr) -> bool {
    let both = |a: &Who, b: &Who| Some((slot(g, pl, a)?, slot(g, pl, b)?));
    match e {
        BoolExpr::To(w, pos) => who(g, pl, w).is_some_and(|p| pl[p] == Some(g.q(pos))),
        BoolExpr::Before(a, b) => both(a, b).is_some_and(|(x, y)| x < y),
        BoolExpr::After(a, b) => both(a, b).is_some_and(|(x, y)| x > y),
        BoolExpr::Adjacent(a, b) => both(a, b).is_some_and(|(x, y)| (x - y).abs() == 1),
        BoolExpr::Compare(op, a, b) => match (number(g, pl, a), number(g, pl, b)) {
            (Some(x), Some(y)) => match op {
                CmpOp::Eq => x == y,
                CmpOp::Ne => x != y,
                CmpOp::Lt => x < y,
                CmpOp::Gt => x > y,
                CmpOp::Le => x <= y,
                CmpOp::Ge => x >= y,
            },
            _ => false,
        },
        BoolExpr::IfThen(xs, ys) => !xs.iter().all(|x| holds(g, pl, x)) || ys.iter().all(|y| holds(g, pl, y)),
        BoolExpr::And(a, b) => holds(g, pl, a) && holds(g, pl, b),
        BoolExpr::Or(a, b) => holds(g, pl, a) || holds(g, pl, b),
        BoolExpr::Not(a) => !holds(g, pl, a),
    }
}

// Logic closure by naive saturation over (symbol, negated) pairs.

type Lit = (u32, bool);

fn lit(l: Literal) -> Lit {
    (l.symbol, l.negated)
}

pub fn pairs(s: &ExpressionSet) -> BTreeSet<(Lit, Lit)> {
    s.iter().map(|i| (lit(i.antecedent()), lit(i.consequent()))).collect()
}

/// Everything derivable from `s` (including `s`) by contraposition and
/// chaining, never relating a symbol to itself. Literal `(k, neg)` is row
/// `2k + neg` of a reachability matrix saturated round by round.
pub fn saturate(s: &ExpressionSet) -> BTreeSet<(Lit, Lit)> {
    let n = 2 * s
        .iter()
        .map(|i| i.antecedent().symbol.max(i.consequent().symbol) + 1)
        .max()
        .unwrap_or(0) as usize;
    let idx = |l: Lit| 2 * l.0 as usize + l.1 as usize;
    let mut m = vec![vec![false; n]; n];
    for (a, b) in pairs(s) {
        m[idx(a)][idx(b)] = true;
    }
    loop {
        let mut next = m.clone();
        for a in 0..n {
            for b in 0..n {
                if !m[a][b] {
                    continue;
                }
                next[b ^ 1][a ^ 1] = true;
                for c in 0..n {
                    if m[b][c] && a / 2 != c / 2 {
                        next[a][c] = true;
                    }
                }
            }
        }
        if next == m {
            break;
        }
        m = next;
    }
    let lit_of = |i: usize| ((i / 2) as u32, i % 2 == 1);
    let mut out = BTreeSet::new();
    for a in 0..n {
        for b in 0..n {
            if m[a][b] {
                out.insert((lit_of(a), lit_of(b)));
            }
        }
    }
    out
}

/// A random placement meeting the capacity bounds, by rejection.
pub fn random_placement(rng: &mut StdRng, g: &Game) -> Option<Placement> {
    for _ in 0..500 {
        let pl: Placement = g
            .participants
            .iter()
            .map(|_| {
                if g.at_most_one && rng.gen_bool(0.2) {
                    None
                } else {
                    Some(rng.gen_range(0..g.positions.len()))
                }
            })
            .collect();
        let fits = g.caps.iter().enumerate().all(|(r, &(min, max))| {
            let k = pl.iter().filter(|&&x| x == Some(r)).count();
            min <= k && k <= max
        });
        if fits {
            return Some(pl);
        }
    }
    all_placements(g).choose(rng).cloned()
}

// Random inputs.

pub fn random_literal(rng: &mut StdRng, symbols: u32) -> Literal {
    Literal {
        symbol: rng.gen_range(0..symbols),
        negated: rng.gen_bool(0.5),
    }
}

/// Up to `max_len` implications over `symbols` symbols.
pub fn random_set(rng: &mut StdRng, symbols: u32, max_len: usize) -> ExpressionSet {
    // distinct implications over k symbols: 2k * 2(k - 1)
    let distinct = (4 * symbols * symbols.saturating_sub(1)) as usize;
    let len = rng.gen_range(0..=max_len.min(distinct));
    let mut out = ExpressionSet::new();
    while out.len() < len {
        let a = random_literal(rng, symbols);
        let b = random_literal(rng, symbols);
        if let Ok(i) = Implication::new(a, b) {
            out.insert(i);
        }
    }
    out
}

/// A game of at most 5 participants and 5 positions; about 80% ordered.
pub fn random_game(rng: &mut StdRng) -> Game {
    loop {
        let n = rng.gen_range(1..=5);
        let m = rng.gen_range(1..=5);
        let ordered = rng.gen_bool(0.8);
        let at_most_one = rng.gen_bool(0.25);
        let caps: Vec<(usize, usize)> = if rng.gen_bool(0.4) {
            vec![(0, n); m]
        } else {
            (0..m)
                .map(|_| {
                    let min = rng.gen_range(0..=1);
                    (min, rng.gen_range(min.max(1)..=n))
                })
                .collect()
        };
        let min_sum: usize = caps.iter().map(|c| c.0).sum();
        let max_sum: usize = caps.iter().map(|c| c.1).sum();
        if !at_most_one && !(min_sum <= n && n <= max_sum) || at_most_one && min_sum > n {
            continue;
        }
        let participants = ["A", "B", "C", "D", "E"][..n].iter().map(|s| s.to_string()).collect();
        let positions = if ordered {
            (1..=m).map(|i| format!("S{i}")).collect()
        } else {
            ["X", "Y", "Z", "W", "V"][..m].iter().map(|s| s.to_string()).collect()
        };
        return Game {
            participants,
            positions,
            ordered,
            at_most_one,
            caps,
        };
    }
}

fn subset(rng: &mut StdRng, names: &[String]) -> Vec<String> {
    let k = rng.gen_range(1..=names.len());
    let mut out: Vec<String> = names.choose_multiple(rng, k).cloned().collect();
    out.sort();
    out
}

fn random_who(rng: &mut StdRng, g: &Game) -> Who {
    let roll = rng.gen_range(0..10);
    match roll {
        0 if g.ordered => Who::ArgMax(subset(rng, &g.participants)),
        1 if g.ordered => Who::ArgMin(subset(rng, &g.participants)),
        2 => Who::Select(g.positions.choose(rng).unwrap().clone()),
        _ => Who::Named(g.participants.choose(rng).unwrap().clone()),
    }
}

pub fn random_num(rng: &mut StdRng, g: &Game, depth: u32) -> NumExpr {
    let leaf = depth == 0 || rng.gen_bool(0.5);
    let roll = if leaf { rng.gen_range(0..3) } else { rng.gen_range(3..7) };
    match roll {
        0 => NumExpr::Const(rng.gen_range(0..=g.positions.len() as i64 + 1)),
        1 if g.ordered => NumExpr::Value(random_who(rng, g)),
        1 | 2 => {
            let pos = rng.gen_bool(0.6).then(|| g.positions.choose(rng).unwrap().clone());
            NumExpr::Count(subset(rng, &g.participants), pos)
        }
        3 => NumExpr::Add(
            Box::new(random_num(rng, g, depth - 1)),
            Box::new(random_num(rng, g, depth - 1)),
        ),
        4 => NumExpr::Sub(
            Box::new(random_num(rng, g, depth - 1)),
            Box::new(random_num(rng, g, depth - 1)),
        ),
        k => {
            let xs = (0..rng.gen_range(1..=3))
                .map(|_| random_num(rng, g, depth - 1))
                .collect();
            if k == 5 {
                NumExpr::Max(xs)
            } else {
                NumExpr::Min(xs)
            }
        }
    }
}

const OPS: [CmpOp; 6] = [CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Gt, CmpOp::Le, CmpOp::Ge];

/// A random program over `g`; order-dependent kinds only in ordered games.
pub fn random_program(rng: &mut StdRng, g: &Game, depth: u32) -> BoolExpr {
    let leaf = depth == 0 || rng.gen_bool(0.4);
    let roll = if leaf { rng.gen_range(0..5) } else { rng.gen_range(5..9) };
    let sub = |rng: &mut StdRng| random_program(rng, g, depth.saturating_sub(1));
    match roll {
        1 if g.ordered => BoolExpr::Before(random_who(rng, g), random_who(rng, g)),
        2 if g.ordered => BoolExpr::After(random_who(rng, g), random_who(rng, g)),
        3 if g.ordered => BoolExpr::Adjacent(random_who(rng, g), random_who(rng, g)),
        4 => BoolExpr::Compare(*OPS.choose(rng).unwrap(), random_num(rng, g, 2), random_num(rng, g, 2)),
        0..=3 => BoolExpr::To(random_who(rng, g), g.positions.choose(rng).unwrap().clone()),
        5 => {
            let xs = (0..rng.gen_range(1..=2)).map(|_| sub(rng)).collect();
            let ys = (0..rng.gen_range(1..=2)).map(|_| sub(rng)).collect();
            BoolExpr::IfThen(xs, ys)
        }
        6 => sub(rng).and(sub(rng)),
        7 => sub(rng).or(sub(rng)),
        _ => sub(rng).negated(),
    }
}

pub fn kinds_of(programs: &[BoolExpr]) -> BTreeSet<FunctionKind> {
    programs.iter().flat_map(|p| p.kinds()).collect()
}

mod common;

use std::collections::{BTreeSet, HashSet};

use common::*;
use lsat::executor::{score_option, select_answer, solve, OptionScore, Polarity, ScoreMode, SearchLimits};
use lsat::game::{enumerate_completions, Assignment};
use lsat::harness::{overall_score, parse_dataset, scaled_score, write_dataset, ProblemRecord, ScoreScale, Section};
use lsat::interp::annotate_positions;
use lsat::logic::{augment_negative, contrapose, extend_closure, extend_closure_traced, AugmentOp, Derivation};
use lsat::program::{bind, eval, parse_program, print_program, TriBool};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// A random valid placement and the library grid for it.
fn random_complete(r: &mut StdRng, g: &Game) -> Option<(Placement, Assignment)> {
    let cfg = g.config();
    let pl = all_placements(g).choose(r)?.clone();
    let a = Assignment::new(&cfg)
        .set_cells(&cfg, &grid_cells(g, &pl))
        .expect("grid of a valid placement propagates");
    Some((pl, a))
}

/// A random subset of the placement's cells, applied to a fresh grid.
fn random_partial(r: &mut StdRng, cells: &[(usize, usize, bool)], keep: f64) -> Vec<(usize, usize, bool)> {
    cells.iter().copied().filter(|_| r.gen_bool(keep)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn closure_equals_saturation(seed in any::<u64>(), symbols in 1u32..=6) {
        let mut r = rng(seed);
        let s = random_set(&mut r, symbols, 8);
        let derived = extend_closure(&s);
        let mut got = pairs(&s);
        for i in &derived {
            prop_assert!(!s.contains(i), "closure repeats an input: {i}");
            got.insert((
                (i.antecedent().symbol, i.antecedent().negated),
                (i.consequent().symbol, i.consequent().negated),
            ));
        }
        prop_assert_eq!(got.len(), s.len() + derived.len());
        prop_assert_eq!(got, saturate(&s));
        let n = s.symbols().len();
        prop_assert!(derived.len() <= (2 * n) * (2 * n));

        let mut union = s.clone();
        for &i in &derived {
            union.insert(i);
        }
        prop_assert!(extend_closure(&union).is_empty());
    }

    #[test]
    fn closure_members_have_derivations(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_set(&mut r, 5, 7);
        let mut known: HashSet<_> = s.iter().copied().collect();
        for (i, how) in extend_closure_traced(&s) {
            match how {
                Derivation::Contraposition(from) => {
                    prop_assert!(known.contains(&from));
                    prop_assert_eq!(contrapose(from), i);
                }
                Derivation::Transitive(a, b) => {
                    prop_assert!(known.contains(&a) && known.contains(&b));
                    prop_assert_eq!(a.consequent(), b.antecedent());
                    prop_assert_eq!((a.antecedent(), b.consequent()), (i.antecedent(), i.consequent()));
                }
            }
            known.insert(i);
        }
    }

    #[test]
    fn contrapose_is_an_involution(seed in any::<u64>()) {
        let mut r = rng(seed);
        for i in &random_set(&mut r, 6, 6) {
            prop_assert_eq!(contrapose(contrapose(*i)), *i);
        }
    }

    #[test]
    fn augmentation_changes_one_expression(seed in any::<u64>(), op in 0usize..3) {
        let mut r = rng(seed);
        let s = random_set(&mut r, 4, 6);
        let op = [AugmentOp::Delete, AugmentOp::ReverseConditional, AugmentOp::NegateSymbol][op];
        let out = augment_negative(&s, op, seed);
        if s.is_empty() {
            prop_assert!(out.is_err());
            return Ok(());
        }
        let Ok(out) = out else { return Ok(()); };
        prop_assert_eq!(&augment_negative(&s, op, seed).unwrap(), &out);
        match op {
            AugmentOp::Delete => {
                prop_assert_eq!(out.len(), s.len() - 1);
                prop_assert!(out.iter().all(|i| s.contains(i)));
            }
            _ => {
                prop_assert_eq!(out.len(), s.len());
                let diff = s.iter().zip(out.iter()).filter(|(a, b)| a != b).count();
                prop_assert_eq!(diff, 1);
            }
        }
    }

    #[test]
    fn propagation_is_confluent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_game(&mut r);
        let cfg = g.config();
        let mut cells: Vec<(usize, usize, bool)> = (0..r.gen_range(1..=6))
            .map(|_| (r.gen_range(0..g.participants.len()), r.gen_range(0..g.positions.len()), r.gen_bool(0.4)))
            .collect();
        let apply = |cells: &[(usize, usize, bool)]| {
            cells.iter().try_fold(Assignment::new(&cfg), |a, &(p, q, v)| a.set_cell(&cfg, p, q, v))
        };
        let first = apply(&cells);
        cells.shuffle(&mut r);
        prop_assert_eq!(&apply(&cells), &first);
        prop_assert_eq!(&Assignment::new(&cfg).set_cells(&cfg, &cells), &first);
    }

    #[test]
    fn completions_match_enumeration(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_game(&mut r);
        let cfg = g.config();
        let Some((pl, _)) = random_complete(&mut r, &g) else { return Ok(()); };
        let given = random_partial(&mut r, &grid_cells(&g, &pl), 0.3);
        let a = Assignment::new(&cfg).set_cells(&cfg, &given).unwrap();
        let everyone: Vec<usize> = (0..g.participants.len()).collect();
        let got: BTreeSet<Placement> = enumerate_completions(&a, &cfg, &everyone)
            .iter()
            .filter(|c| c.validate(&cfg))
            .map(placement_of)
            .collect();
        let want: BTreeSet<Placement> = all_placements(&g)
            .into_iter()
            .filter(|c| given.iter().all(|&(p, q, v)| (c[p] == Some(q)) == v))
            .collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn print_then_parse_is_identity(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_game(&mut r);
        let ast = random_program(&mut r, &g, 3);
        let text = print_program(&ast);
        let back = parse_program(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        prop_assert_eq!(&back, &ast, "{}", text);
        prop_assert_eq!(print_program(&back), text);
    }

    #[test]
    fn refinement_never_flips(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_game(&mut r);
        let cfg = g.config();
        let Some((pl, full)) = random_complete(&mut r, &g) else { return Ok(()); };
        let cells = grid_cells(&g, &pl);
        let coarse = random_partial(&mut r, &cells, 0.3);
        let mut fine = coarse.clone();
        fine.extend(random_partial(&mut r, &cells, 0.4));
        let a = Assignment::new(&cfg).set_cells(&cfg, &coarse).unwrap();
        let b = a.set_cells(&cfg, &fine).unwrap();
        let ast = random_program(&mut r, &g, 3);
        let (va, vb, vc) = (eval(&ast, &a, &cfg).unwrap(), eval(&ast, &b, &cfg).unwrap(), eval(&ast, &full, &cfg).unwrap());
        prop_assert!(vc.is_known());
        prop_assert_eq!(vc, TriBool::from(holds(&g, &pl, &ast)));
        if va.is_known() {
            prop_assert_eq!(va, vb);
        }
        if vb.is_known() {
            prop_assert_eq!(vb, vc);
        }
    }

    #[test]
    fn true_on_partial_holds_on_every_completion(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_game(&mut r);
        let cfg = g.config();
        let Some((pl, _)) = random_complete(&mut r, &g) else { return Ok(()); };
        let given = random_partial(&mut r, &grid_cells(&g, &pl), 0.5);
        let a = Assignment::new(&cfg).set_cells(&cfg, &given).unwrap();
        let ast = random_program(&mut r, &g, 2);
        let v = eval(&ast, &a, &cfg).unwrap();
        if v.is_known() {
            for c in all_placements(&g).iter().filter(|c| given.iter().all(|&(p, q, t)| (c[p] == Some(q)) == t)) {
                prop_assert_eq!(TriBool::from(holds(&g, c, &ast)), v);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn solve_matches_oracle_in_any_order(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_game(&mut r);
        let cfg = g.config();
        let mut programs: Vec<_> = (0..r.gen_range(0..=4)).map(|_| random_program(&mut r, &g, 2)).collect();
        let bound: Vec<_> = programs.iter().map(|p| bind(p, &cfg).unwrap()).collect();
        let got = solve(&bound, &cfg, SearchLimits::default()).unwrap();
        let placements: BTreeSet<Placement> = got.iter().map(placement_of).collect();
        prop_assert_eq!(placements.len(), got.len());
        prop_assert_eq!(&placements, &oracle_solutions(&g, &programs));

        programs.shuffle(&mut r);
        let bound: Vec<_> = programs.iter().map(|p| bind(p, &cfg).unwrap()).collect();
        prop_assert_eq!(solve(&bound, &cfg, SearchLimits::default()).unwrap(), got.clone());

        if let Some(option) = programs.first() {
            let option = bind(option, &cfg).unwrap();
            let ratio = score_option(&got, Some(&option), &cfg, ScoreMode::Ratio, 0);
            let count = score_option(&got, Some(&option), &cfg, ScoreMode::Count, 0);
            prop_assert!((0.0..=1.0).contains(&ratio.value));
            prop_assert!(count.value <= got.len() as f64);
        }
    }

    #[test]
    fn dataset_round_trip(
        id in "[a-z]{1,6}-[0-9]{1,3}",
        context in "\\PC{0,40}",
        question in "\\PC{0,20}",
        options in prop::collection::vec("\\PC{0,10}", 4..=5),
        label in 0usize..4,
        negative in any::<bool>(),
        seed in any::<u64>(),
    ) {
        let record = ProblemRecord {
            id,
            section: Section::AR,
            context,
            question,
            options,
            label,
            polarity: if negative { Polarity::Negative } else { Polarity::Positive },
            annotations: None,
        };
        let once = parse_dataset(&write_dataset(&[record]), seed).unwrap();
        prop_assert_eq!(once[0].options.len(), 5);
        let twice = parse_dataset(&write_dataset(&once), seed).unwrap();
        prop_assert_eq!(twice, once);
    }

    #[test]
    fn scaled_score_is_monotone(a in 0.0f64..=100.0, b in 0.0f64..=100.0) {
        let scale = ScoreScale::bundled();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(scale.interpolate(lo) <= scale.interpolate(hi));
        prop_assert!(scaled_score(lo, &scale) <= scaled_score(hi, &scale));
        prop_assert!((120..=180).contains(&scaled_score(lo, &scale)));
    }

    #[test]
    fn overall_is_a_convex_combination(ar in 0.0f64..=100.0, lr in 0.0f64..=100.0, rc in 0.0f64..=100.0) {
        let o = overall_score(ar, lr, rc);
        prop_assert!(ar.min(lr).min(rc) - 1e-9 <= o && o <= ar.max(lr).max(rc) + 1e-9);
    }

    #[test]
    fn selection_survives_positive_scaling(values in prop::collection::vec(0u32..6, 5), k in 0.01f64..100.0, neg in any::<bool>()) {
        let scores = |k: f64| -> Vec<OptionScore> {
            values.iter().enumerate().map(|(i, &v)| OptionScore {
                option_index: i,
                mode: ScoreMode::Count,
                value: v as f64 * k,
                flagged: false,
            }).collect()
        };
        let polarity = if neg { Polarity::Negative } else { Polarity::Positive };
        prop_assert_eq!(select_answer(&scores(1.0), polarity), select_answer(&scores(k), polarity));
    }

    #[test]
    fn position_marks_are_idempotent(lines in prop::collection::vec("[a-z ]{0,8}", 0..8)) {
        let text = lines.join("\n");
        let once = annotate_positions(&text);
        prop_assert_eq!(annotate_positions(&once), once.clone());
        prop_assert!(once.len() >= text.len());
    }
}

#[test]
fn unconstrained_exactly_one_counts() {
    for n in 1..=4 {
        for m in 1..=4 {
            let g = Game {
                participants: ["A", "B", "C", "D"][..n].iter().map(|s| s.to_string()).collect(),
                positions: ["X", "Y", "Z", "W"][..m].iter().map(|s| s.to_string()).collect(),
                ordered: false,
                at_most_one: false,
                caps: vec![(0, n); m],
            };
            let cfg = g.config();
            let everyone: Vec<usize> = (0..n).collect();
            let got = enumerate_completions(&Assignment::new(&cfg), &cfg, &everyone);
            assert_eq!(got.len(), m.pow(n as u32), "{n} participants, {m} positions");
        }
    }
}

mod common;

use std::cell::RefCell;
use std::rc::Rc;

use common::props::{self, CASES};
use purelog::{mm_solve, EquationSet};

fn check(result: Result<usize, String>) {
    match result {
        Ok(n) => assert!(n >= CASES, "only {} cases", n),
        Err(e) => panic!("{}", e),
    }
}

#[test]
fn mm_and_engine_unifiers_agree() {
    check(props::mm_engine_agreement(0x5eed_0001, CASES));
}

#[test]
fn composition_law_holds() {
    check(props::composition_law(0x5eed_0002, CASES));
}

#[test]
fn failed_unification_leaves_trail_untouched() {
    check(props::trail_purity(0x5eed_0003, CASES));
}

#[test]
fn write_then_parse_round_trips() {
    check(props::round_trip(0x5eed_0004, CASES));
}

#[test]
fn meta_interpreter_matches_direct_execution() {
    check(props::meta_interpreter(0x5eed_0005, CASES));
}

/// Every head unification the engine performs while running corpus
/// programs is replayed through the equation-set solver.
#[test]
fn engine_head_unifications_replay_through_mm() {
    let events = Rc::new(RefCell::new(Vec::new()));
    let mut m = common::machine(&["append.pl", "member.pl", "sublist.pl", "quicksort.pl", "solve.pl"]);
    let sink = Rc::clone(&events);
    m.set_unify_observer(Some(Box::new(move |h| sink.borrow_mut().push(h.clone()))));
    for q in [
        "append(Xs, Ys, [mon, wed, fri]).",
        "sublist([b, X], [a, b, c, d]).",
        "qs([7, 9, 8, 1, 5, 3, 3, 0, 12], Ys).",
        "solve(member(X, [mon, wed, fri])).",
        "member(f(X, Y), [f(a, b), g(c), f(c, Y)]).",
        "append([a, b|T], [c], [a, b, c, d, c]).",
        "append(Xs, [c|Ys], [a, c, b, c]).",
        "sublist(Xs, [a, b, c, d, e, f, g, h]).",
        "qs([9, 8, 7, 6, 5, 4, 3, 2, 1, 0], Ys).",
        "qs([31, 4, 15, 9, 26, 5, 35, 8, 97, 93, 23, 84, 62, 64, 33, 83, 27, 95, 2, 88], Ys).",
    ] {
        common::count(&mut m, q).unwrap();
    }
    let events = events.borrow();
    assert!(events.len() >= CASES, "{} events", events.len());
    for h in events.iter() {
        let outcome = mm_solve(&EquationSet::single(h.goal.clone(), h.head.clone()), h.occur_check);
        assert_eq!(outcome.is_success(), h.unified, "{:?} = {:?}", h.goal, h.head);
    }
}

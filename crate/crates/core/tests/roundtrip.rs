use proptest::prelude::*;

use texp::explorers::TreeDecomposition;
use texp::io::*;
use texp::{Instance, MultiAgentSchedule, PresencePattern, TemporalGraph, TemporalWalk};

const L: usize = 40;

fn pattern() -> impl Strategy<Value = PresencePattern> {
    prop_oneof![
        Just(PresencePattern::Always),
        proptest::collection::btree_set(0..=L, 0..12).prop_map(PresencePattern::steps),
        proptest::collection::btree_set(0..=L, 0..8).prop_map(|cuts| {
            let c: Vec<usize> = cuts.into_iter().collect();
            PresencePattern::Intervals(c.chunks(2).map(|p| (p[0], *p.last().unwrap())).collect())
        }),
        (0..50usize, 1..6usize, 0..6usize).prop_map(|(offset, present, absent)| PresencePattern::Periodic {
            offset,
            present,
            absent,
        }),
    ]
}

fn instance() -> impl Strategy<Value = Instance> {
    (2..9usize)
        .prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
            (
                Just(n),
                proptest::sample::subsequence(pairs.clone(), 1..=pairs.len()),
                proptest::collection::vec(pattern(), pairs.len()),
                0..n,
            )
        })
        .prop_map(|(n, pairs, pats, start)| {
            let edges = pairs.into_iter().zip(pats).map(|((a, b), p)| (a, b, p)).collect();
            Instance::new(TemporalGraph::new(n, edges, L).unwrap(), start).unwrap()
        })
}

fn schedule() -> impl Strategy<Value = MultiAgentSchedule> {
    proptest::collection::vec(
        (0..20usize, proptest::collection::btree_map(0..500usize, 0..20usize, 0..15)),
        0..4,
    )
    .prop_map(|agents| MultiAgentSchedule {
        agents: agents
            .into_iter()
            .map(|(start, moves)| {
                let mut w = TemporalWalk::new(start);
                for (step, to) in moves {
                    w.push(step, to);
                }
                w
            })
            .collect(),
    })
}

proptest! {
    #[test]
    fn instance_json_is_stable(inst in instance()) {
        let s = instance_to_json(&inst);
        let back = instance_from_json(&s).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(instance_to_json(&back), s);
    }

    #[test]
    fn schedule_json_is_stable(sched in schedule()) {
        let s = schedule_to_json(&sched);
        let back = schedule_from_json(&s).unwrap();
        prop_assert_eq!(&back, &sched);
        prop_assert_eq!(schedule_to_json(&back), s);
    }

    #[test]
    fn decomposition_json_is_stable(
        bags in proptest::collection::vec(proptest::collection::vec(0..30usize, 1..5), 1..8),
        links in proptest::collection::vec(0..100usize, 7),
    ) {
        let tree = (1..bags.len()).map(|i| (links[i - 1] % i, i)).collect();
        let td = TreeDecomposition::new(bags, tree);
        let s = decomposition_to_json(&td);
        let back = decomposition_from_json(&s).unwrap();
        prop_assert_eq!(&back, &td);
        prop_assert_eq!(decomposition_to_json(&back), s);
    }
}

#[test]
fn files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let inst = texp::generators::rotating_star(3, None).unwrap();
    let p = dir.path().join("inst.json");
    write_instance(&p, &inst).unwrap();
    let text = std::fs::read_to_string(&p).unwrap();
    let again = read_instance(&p).unwrap();
    write_instance(&p, &again).unwrap();
    assert_eq!(std::fs::read_to_string(&p).unwrap(), text);
}

#[test]
fn malformed_input_is_rejected() {
    assert!(instance_from_json("{").is_err());
    assert!(instance_from_json(r#"{"n":2,"start":5,"lifetime":4,"edges":[]}"#).is_err());
    assert!(instance_from_json(
        r#"{"n":2,"start":0,"lifetime":4,"edges":[{"u":0,"v":1,"presence":{"type":"steps","steps":[9]}}]}"#
    )
    .is_err());
    assert!(schedule_from_json(r#"{"agents":[{"start":0,"moves":[[1]]}]}"#).is_err());
}

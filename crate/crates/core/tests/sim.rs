use pgu_core::gp::Tree;
use pgu_core::sim::*;
use proptest::prelude::*;

fn two_node_instance(truck_nodes: &[usize], tasks: Vec<Task>) -> Instance {
    let map = TerminalMap::new(
        vec![NodeKind::Berth, NodeKind::Yard],
        vec![
            Arc { from: 0, to: 1, seconds: 60.0 },
            Arc { from: 1, to: 0, seconds: 60.0 },
        ],
    )
    .unwrap();
    let inst = Instance {
        schema: SCHEMA_VERSION,
        map,
        cranes: vec![
            Crane { id: 0, kind: CraneKind::Quay, node: 0, service_seconds: (30.0, 30.0) },
            Crane { id: 1, kind: CraneKind::Yard, node: 1, service_seconds: (30.0, 30.0) },
        ],
        tasks,
        trucks: truck_nodes
            .iter()
            .enumerate()
            .map(|(id, &node)| TruckStart { id, node })
            .collect(),
        seed: 1,
        meta: InstanceMeta { loading_ratio: 0.0, trucks_per_qc: truck_nodes.len() },
    };
    inst.validate().unwrap();
    inst
}

fn unload(id: usize, teu: u8) -> Task {
    Task {
        id,
        qc_id: 0,
        start_node: 0,
        end_node: 1,
        teu,
        op_type: OpType::Unload,
        dispatch_type: DispatchType::QuayToYard,
        sequence_index: id,
    }
}

#[test]
fn one_task_timeline() {
    // at quay: 30 s service, 60 s drive, 30 s yard service
    let inst = two_node_instance(&[0], vec![unload(0, 1)]);
    let r = run_simulation(&inst, &ReferenceRule::default(), false).unwrap();
    assert_eq!(r.makespan_seconds, 120.0);
    assert_eq!(r.objective, 3600.0 / 120.0);
    assert_eq!(r.completed_tasks, 1);

    // starting in the yard adds the 60 s approach
    let inst = two_node_instance(&[1], vec![unload(0, 1)]);
    let r = run_simulation(&inst, &ReferenceRule::default(), false).unwrap();
    assert_eq!(r.makespan_seconds, 180.0);
    assert!(r.makespan_seconds >= 90.0);
}

#[test]
fn twenty_foot_tasks_merge() {
    let inst = two_node_instance(&[0], vec![unload(0, 1), unload(1, 1)]);
    let r = run_simulation(&inst, &ReferenceRule::default(), true).unwrap();
    let audit = r.audit.unwrap();
    assert_eq!(audit.assignments.len(), 1);
    assert_eq!(audit.assignments[0].tasks, vec![0, 1]);
    // two quay handlings, one drive, two yard handlings
    assert_eq!(r.makespan_seconds, 30.0 + 30.0 + 60.0 + 30.0 + 30.0);
    assert_eq!(r.objective, 2.0 / (180.0 / 3600.0));
}

#[test]
fn forty_foot_tasks_do_not_merge() {
    let inst = two_node_instance(&[0], vec![unload(0, 2), unload(1, 1)]);
    let r = run_simulation(&inst, &ReferenceRule::default(), true).unwrap();
    let audit = r.audit.unwrap();
    assert_eq!(audit.assignments.len(), 2);
    assert!(audit.assignments.iter().all(|a| a.tasks.len() == 1));
}

#[test]
fn empty_instance_rejected() {
    let mut inst = two_node_instance(&[0], vec![unload(0, 1)]);
    inst.tasks.clear();
    assert!(inst.validate().is_err());
    assert!(run_simulation(&inst, &ReferenceRule::default(), false).is_err());
}

#[test]
fn non_finite_rules_do_not_crash() {
    let inst = generate_instance(&GeneratorParams::default(), 3).unwrap();
    let nan_rule = |_: &FeatureVector| f64::NAN;
    let r = run_simulation(&inst, &nan_rule, false).unwrap();
    assert_eq!(r.completed_tasks, inst.tasks.len());
    let tree = Tree::parse_sexpr("(/ TT (- OT OT))").unwrap();
    run_simulation(&inst, &tree, false).unwrap();
}

#[test]
fn features_at_dispatch() {
    let inst = two_node_instance(&[0, 0, 0, 0, 1], vec![unload(0, 1), unload(1, 2)]);
    let mut state = SimState::new(&inst);
    for t in 0..3 {
        state.trucks[t].status = TruckStatus::WaitingAtCrane;
    }
    let f = state.compute_features(4, 0);
    assert_eq!(f.snwtn, 3.0);
    assert_eq!(f.sntn, 4.0);
    assert_eq!(f.entn, 1.0);
    assert_eq!(f.enwtn, 0.0);
    assert_eq!(f.tt, 60.0);
    assert_eq!(f.rtn, 2.0);
    assert_eq!(f.ctn, 0.0);
    assert_eq!(f.ot, 1.0);
    assert_eq!(f.dt, 0.0);
    // cold start: midpoint of the (30, 30) service bounds
    assert_eq!(f.alt, 30.0);
    assert_eq!(f.aut, 30.0);
    // a truck standing on the start node needs no travel
    assert_eq!(state.compute_features(3, 0).tt, 0.0);

    // inbound trucks count toward the destination node
    state.trucks[3].status = TruckStatus::Traveling;
    state.trucks[3].dest = Some(1);
    let f = state.compute_features(4, 0);
    assert_eq!(f.sntn, 3.0);
    assert_eq!(f.entn, 2.0);
}

#[test]
fn determinism_and_conservation() {
    for seed in 0..5 {
        let params = GeneratorParams {
            trucks_per_qc: 5 + (seed as usize % 3),
            loading_ratio: 0.25 + 0.125 * seed as f64,
            ..Default::default()
        };
        let inst = generate_instance(&params, seed).unwrap();
        let rule = ReferenceRule::default();
        let a = run_simulation(&inst, &rule, true).unwrap();
        let b = run_simulation(&inst, &rule, true).unwrap();
        assert_eq!(a, b);
        check_conservation(&inst, &a);
    }
}

fn check_conservation(inst: &Instance, r: &SimResult) {
    assert_eq!(r.completed_tasks, inst.tasks.len());
    let audit = r.audit.as_ref().unwrap();
    let mut seen = vec![0; inst.tasks.len()];
    for a in &audit.assignments {
        for &t in &a.tasks {
            seen[t] += 1;
        }
        let teu: u8 = a.tasks.iter().map(|&t| inst.tasks[t].teu).sum();
        assert!(teu <= 2);
        if let [x, y] = a.tasks[..] {
            let (x, y) = (&inst.tasks[x], &inst.tasks[y]);
            assert_eq!(x.qc_id, y.qc_id);
            assert!(x.start_node == y.start_node || x.end_node == y.end_node);
        }
    }
    assert!(seen.iter().all(|&c| c == 1));
    // FCFS at every crane
    assert_eq!(audit.crane_arrivals, audit.crane_served);
    assert!(audit.completion_times.iter().all(|t| t.is_finite()));
    let ident = r.objective * r.makespan_seconds / 3600.0;
    assert!((ident - r.total_teu as f64).abs() <= 1e-9 * r.total_teu as f64);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn generated_instances_conserve(
        seed in any::<u64>(),
        qcs in 1usize..4,
        per_qc in 1usize..8,
        tasks in 1usize..50,
        ratio in 0.0f64..=1.0,
    ) {
        let params = GeneratorParams {
            num_qcs: qcs,
            trucks_per_qc: per_qc,
            num_tasks: tasks,
            loading_ratio: ratio,
            ..Default::default()
        };
        let inst = generate_instance(&params, seed).unwrap();
        let loads = inst.tasks.iter().filter(|t| t.op_type == OpType::Load).count();
        prop_assert_eq!(loads, (ratio * tasks as f64).round() as usize);
        let r = run_simulation(&inst, &ReferenceRule::default(), true).unwrap();
        check_conservation(&inst, &r);
    }
}

//! Acceptance criteria 1 to 9. Each test prints one PASS/FAIL line and fails
//! when its criterion does not hold. Run with `--nocapture` to see the lines.

use std::net::Ipv4Addr;
use std::path::Path;
use std::process::Command;
use std::sync::Mutex;
use std::time::Instant;

use transmig::experiments::{cmd_benefit, preset_scenarios};
use transmig::presets::{placement_preset, PLACEMENT_PRESETS};
use transmig::scenario::Scenario;
use transmig::solve::{evaluate, exhaustive, ga, heuristic, random, Mode};
use transmig_core::fabric::{ArpOp, EthType, FlowMod, FlowRule, MacAddr, PacketHeader, PortId, Verdict};
use transmig_core::sim::{
    run_migration, sweep, MigrationKind, OfStep, SimConfig, SwitchSel, Testbed, CLIENT_PORT, MIGRATION_FLOWS,
    SERVER_PORT, SW1_LINK_PORT, SW2_LINK_PORT, T1_PORT, T2_PORT,
};
use transmig_core::{GaParams, NodeId, Objective, Placement};

// timing-based criteria must not share the machine with each other
static SERIAL: Mutex<()> = Mutex::new(());

fn serial() -> std::sync::MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

fn report(n: u32, ok: bool, detail: String) {
    println!("criterion {n}: {} {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} failed: {detail}");
}

fn load(s: &Scenario, p: &[NodeId]) -> f64 {
    evaluate(&s.graph, &s.demands, p, Mode::NonBlocking).total_load
}

fn median_time(mut f: impl FnMut() -> f64, repeats: usize) -> f64 {
    let mut v: Vec<f64> = (0..repeats).map(|_| f()).collect();
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

fn preset_cases(name: &str) -> (transmig::presets::PlacementPreset, Vec<Scenario>) {
    let p = placement_preset(name, None).unwrap();
    let s = preset_scenarios(&p).unwrap();
    (p, s)
}

#[test]
fn c1_heuristic_against_exhaustive_and_random() {
    let _g = serial();
    let start = Instant::now();
    let (p, scenarios) = preset_cases("oracle-small");
    let lambda = p.lambdas[0];
    let mut close = 0;
    let mut worse_than_random = Vec::new();
    for s in &scenarios {
        assert!(s.graph.node_count() <= 15 && s.graph.candidates().len() <= 8);
        let n = p.n.min(s.graph.candidates().len());
        let h = load(s, &heuristic(&s.graph, &s.demands, n, lambda).unwrap().transcoders);
        let e = load(s, &exhaustive(&s.graph, &s.demands, n, Objective::NetworkLoad, 100_000).unwrap().transcoders);
        let r: f64 = (0..100)
            .map(|k| load(s, &random(&s.graph, n, s.seed() + k).unwrap().transcoders))
            .sum::<f64>()
            / 100.0;
        if h <= 1.25 * e {
            close += 1;
        }
        if h > r {
            worse_than_random.push(format!("{} h={h} mean_random={r:.1}", s.name));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let need = (scenarios.len() * 4).div_ceil(5);
    let ok = close >= need && worse_than_random.is_empty() && secs < 60.0;
    report(
        1,
        ok,
        format!(
            "within 1.25x exhaustive {close}/{} (need {need}); worse than random mean on {}: [{}]; {secs:.1}s",
            scenarios.len(),
            worse_than_random.len(),
            worse_than_random.join(", ")
        ),
    );
}

#[test]
fn c2_heuristic_close_to_long_ga() {
    let _g = serial();
    let (p, scenarios) = preset_cases("ga-nostop");
    let mut ok = 0;
    let mut ratios = Vec::new();
    for s in &scenarios {
        let h = load(s, &heuristic(&s.graph, &s.demands, p.n, p.lambdas[0]).unwrap().transcoders);
        let gp = GaParams { generations: p.ga_generations, seed: s.seed(), ..GaParams::default() };
        let g = load(s, &ga(&s.graph, &s.demands, p.n, &gp, None).unwrap().placement.transcoders);
        if h <= 1.16 * g {
            ok += 1;
        }
        ratios.push(format!("{:.3}", h / g));
    }
    report(2, ok >= 8, format!("heuristic/GA within 1.16 on {ok}/{} [{}]", scenarios.len(), ratios.join(" ")));
}

#[test]
fn c3_heuristic_faster_than_ga_to_same_score() {
    let _g = serial();
    let (p, scenarios) = preset_cases("runtime-300");
    let lambda = p.lambdas[0];
    let mut faster = 0;
    for s in &scenarios {
        assert_eq!(s.graph.node_count(), 300);
        let h: Placement = heuristic(&s.graph, &s.demands, p.n, lambda).unwrap();
        let stop = load(s, &h.transcoders);
        let th = median_time(|| heuristic(&s.graph, &s.demands, p.n, lambda).unwrap().runtime_s, 5);
        let gp = GaParams { generations: p.ga_generations, seed: s.seed(), ..GaParams::default() };
        let tg = median_time(|| ga(&s.graph, &s.demands, p.n, &gp, Some(stop)).unwrap().placement.runtime_s, 5);
        if th < tg {
            faster += 1;
        }
    }
    let need = (scenarios.len() * 9).div_ceil(10);
    report(3, faster >= need, format!("heuristic faster on {faster}/{} (need {need})", scenarios.len()));
}

#[test]
fn c4_separation_tradeoff() {
    let _g = serial();
    let (p, scenarios) = preset_cases("separation-200");
    let (small, large) = (0.01, 0.1);
    let (mut ls, mut ll, mut ts, mut tl) = (0.0, 0.0, 0.0, 0.0);
    for s in &scenarios {
        assert_eq!(s.graph.node_count(), 200);
        ls += load(s, &heuristic(&s.graph, &s.demands, p.n, small).unwrap().transcoders);
        ll += load(s, &heuristic(&s.graph, &s.demands, p.n, large).unwrap().transcoders);
        ts += median_time(|| heuristic(&s.graph, &s.demands, p.n, small).unwrap().runtime_s, 15);
        tl += median_time(|| heuristic(&s.graph, &s.demands, p.n, large).unwrap().runtime_s, 15);
    }
    let k = scenarios.len() as f64;
    let (ls, ll, ts, tl) = (ls / k, ll / k, ts / k, tl / k);
    report(
        4,
        ls <= ll && ts >= tl,
        format!("mean load {ls:.1} vs {ll:.1}; mean runtime {:.3}ms vs {:.3}ms", ts * 1e3, tl * 1e3),
    );
}

#[test]
fn c5_transcoding_beats_direct_when_trunks_are_shared() {
    let _g = serial();
    let mut checked = 0;
    let mut bad = Vec::new();
    for name in PLACEMENT_PRESETS {
        let (p, scenarios) = preset_cases(name);
        for row in cmd_benefit(&scenarios, p.n, p.lambdas[0]).unwrap() {
            if row.min_trunk_fanout >= 2 {
                checked += 1;
                if row.transcoded_load >= row.direct_load {
                    bad.push(format!("{} {} >= {}", row.scenario, row.transcoded_load, row.direct_load));
                }
            }
        }
    }
    report(
        5,
        checked > 0 && bad.is_empty(),
        format!("{checked} shared-trunk scenarios checked, {} violations [{}]", bad.len(), bad.join(", ")),
    );
}

// ---- criterion 6: the expected outcomes below are written out by hand from
// the flow listing's intent, not read back from the parser.

#[derive(Copy, Clone, Debug)]
enum Act {
    Out(PortId),
    SetDst(MacAddr),
}

struct Rule {
    flow: u32,
    in_port: PortId,
    eth: EthType,
    dst_mac: Option<MacAddr>,
    src_ip: Ipv4Addr,
    dst_ip: Ipv4Addr,
    cookie: u64,
    acts: Vec<Act>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Outcome {
    IngressDisabled,
    Drop(u64),
    Filtered,
    Fwd {
        cookie: Option<u64>,
        out: Vec<(PortId, MacAddr)>,
        discarded: Vec<PortId>,
    },
}

struct Net {
    server: MacAddr,
    t1: MacAddr,
    t2: MacAddr,
    client: MacAddr,
    server_ip: Ipv4Addr,
    tc_ip: Ipv4Addr,
    client_ip: Ipv4Addr,
}

impl Net {
    fn new() -> Self {
        Self {
            server: MacAddr([2, 0, 0, 0, 0, 0x01]),
            t1: MacAddr([2, 0, 0, 0, 0, 0x11]),
            t2: MacAddr([2, 0, 0, 0, 0, 0x12]),
            client: MacAddr([2, 0, 0, 0, 0, 0x21]),
            server_ip: Ipv4Addr::new(10, 0, 0, 1),
            tc_ip: Ipv4Addr::new(10, 0, 0, 2),
            client_ip: Ipv4Addr::new(10, 0, 0, 3),
        }
    }

    fn ports(&self, sw: SwitchSel) -> [PortId; 3] {
        match sw {
            SwitchSel::Sw1 => [SERVER_PORT, T1_PORT, SW1_LINK_PORT],
            SwitchSel::Sw2 => [SW2_LINK_PORT, T2_PORT, CLIENT_PORT],
        }
    }

    fn enabled(&self, stage: u8, port: PortId) -> bool {
        match port {
            T1_PORT => stage < 5,
            _ => true,
        }
    }

    fn learned(&self, sw: SwitchSel, mac: MacAddr) -> Option<PortId> {
        let table = match sw {
            SwitchSel::Sw1 => [
                (self.server, SERVER_PORT),
                (self.t1, T1_PORT),
                (self.t2, SW1_LINK_PORT),
                (self.client, SW1_LINK_PORT),
            ],
            SwitchSel::Sw2 => [
                (self.server, SW2_LINK_PORT),
                (self.t1, SW2_LINK_PORT),
                (self.t2, T2_PORT),
                (self.client, CLIENT_PORT),
            ],
        };
        table.iter().find(|(m, _)| *m == mac).map(|(_, p)| *p)
    }

    /// Who sends on each ingress port during the migration.
    fn sender(&self, sw: SwitchSel, port: PortId) -> (MacAddr, Ipv4Addr, Ipv4Addr) {
        match (sw, port) {
            (SwitchSel::Sw1, SERVER_PORT) | (SwitchSel::Sw2, SW2_LINK_PORT) => (self.server, self.server_ip, self.tc_ip),
            (SwitchSel::Sw1, T1_PORT) => (self.t1, self.tc_ip, self.client_ip),
            (SwitchSel::Sw1, SW1_LINK_PORT) => (self.t2, self.tc_ip, self.server_ip),
            (SwitchSel::Sw2, T2_PORT) => (self.t2, self.tc_ip, self.client_ip),
            (SwitchSel::Sw2, CLIENT_PORT) => (self.client, self.client_ip, self.server_ip),
            _ => unreachable!(),
        }
    }

    fn rules(&self, stage: u8, sw: SwitchSel) -> Vec<Rule> {
        use Act::*;
        let from_server = |flow, in_port, eth, dst_mac, cookie, acts| Rule {
            flow,
            in_port,
            eth,
            dst_mac,
            src_ip: self.server_ip,
            dst_ip: self.tc_ip,
            cookie,
            acts,
        };
        let t2_out = |flow, cookie, acts| Rule {
            flow,
            in_port: T2_PORT,
            eth: EthType::Ipv4,
            dst_mac: None,
            src_ip: self.tc_ip,
            dst_ip: self.client_ip,
            cookie,
            acts,
        };
        let flow4 = || from_server(4, SW2_LINK_PORT, EthType::Ipv4, Some(self.t2), 9999, vec![Out(T2_PORT)]);
        let flow5 = || from_server(5, SW2_LINK_PORT, EthType::Arp, None, 9999, vec![Out(T2_PORT)]);
        match (stage, sw) {
            (1 | 2, _) => vec![],
            (3 | 4, SwitchSel::Sw1) => vec![
                from_server(
                    1,
                    SERVER_PORT,
                    EthType::Ipv4,
                    None,
                    9998,
                    vec![Out(SW1_LINK_PORT), SetDst(self.t1), Out(T1_PORT)],
                ),
                from_server(2, SERVER_PORT, EthType::Arp, None, 9998, vec![Out(SW1_LINK_PORT)]),
            ],
            (3 | 4, SwitchSel::Sw2) => vec![
                from_server(3, SW2_LINK_PORT, EthType::Ipv4, Some(self.t1), 9997, vec![SetDst(self.t2), Out(T2_PORT)]),
                flow4(),
                flow5(),
                t2_out(6, 9997, vec![]),
            ],
            (5, SwitchSel::Sw1) => {
                vec![from_server(9, SERVER_PORT, EthType::Ipv4, None, 9999, vec![Out(SW1_LINK_PORT)])]
            }
            (5, SwitchSel::Sw2) => vec![flow4(), flow5(), t2_out(7, 9999, vec![Out(CLIENT_PORT)])],
            _ => unreachable!(),
        }
    }

    fn expect(&self, stage: u8, sw: SwitchSel, pkt: &PacketHeader) -> (Outcome, Option<u32>) {
        if !self.enabled(stage, pkt.in_port) {
            return (Outcome::IngressDisabled, None);
        }
        let rules = self.rules(stage, sw);
        let hits: Vec<&Rule> = rules
            .iter()
            .filter(|r| {
                r.in_port == pkt.in_port
                    && r.eth == pkt.eth_type
                    && r.dst_mac.is_none_or(|m| m == pkt.dst_mac)
                    && r.src_ip == pkt.src_ip
                    && r.dst_ip == pkt.dst_ip
            })
            .collect();
        assert!(hits.len() <= 1, "hand table overlaps");
        let mut out = Vec::new();
        let mut discarded = Vec::new();
        let mut emit = |port: PortId, mac: MacAddr| {
            if self.enabled(stage, port) {
                out.push((port, mac));
            } else {
                discarded.push(port);
            }
        };
        if let Some(r) = hits.first() {
            if r.acts.is_empty() {
                return (Outcome::Drop(r.cookie), Some(r.flow));
            }
            let mut mac = pkt.dst_mac;
            for a in &r.acts {
                match *a {
                    Act::Out(p) => emit(p, mac),
                    Act::SetDst(m) => mac = m,
                }
            }
            return (Outcome::Fwd { cookie: Some(r.cookie), out, discarded }, Some(r.flow));
        }
        if pkt.dst_mac.is_broadcast() {
            // floods never reach a port that is down
            for p in self.ports(sw) {
                if p != pkt.in_port && self.enabled(stage, p) {
                    emit(p, pkt.dst_mac);
                }
            }
        } else {
            match self.learned(sw, pkt.dst_mac) {
                Some(p) if p == pkt.in_port => return (Outcome::Filtered, None),
                Some(p) => emit(p, pkt.dst_mac),
                None => unreachable!("every endpoint is pre-learned"),
            }
        }
        (Outcome::Fwd { cookie: None, out, discarded }, None)
    }
}

fn observed(v: &Verdict) -> Outcome {
    match v {
        Verdict::IngressDisabled => Outcome::IngressDisabled,
        Verdict::RuleDrop { cookie } => Outcome::Drop(*cookie),
        Verdict::Filtered => Outcome::Filtered,
        Verdict::Forwarded { cookie, result } => Outcome::Fwd {
            cookie: *cookie,
            out: result.emitted.iter().map(|e| (e.port, e.header.dst_mac)).collect(),
            discarded: result.discarded.iter().map(|(p, _)| *p).collect(),
        },
    }
}

fn stage_testbed(stage: u8) -> Testbed {
    let mut tb = Testbed::new(MIGRATION_FLOWS).unwrap();
    tb.apply_of_step(OfStep::EnableTarget);
    if stage >= 3 {
        tb.apply_of_step(OfStep::InstallDuplication);
    }
    if stage >= 5 {
        tb.apply_of_step(OfStep::Cutover);
    }
    tb
}

fn rules_of(tb: &Testbed, sw: SwitchSel) -> Vec<FlowRule> {
    tb.switch(sw).table().rules().cloned().collect()
}

#[test]
fn c6_flow_table_conformance() {
    let _g = serial();
    let net = Net::new();
    let mut cases = 0;
    let mut mismatches = Vec::new();
    let mut flows_hit = std::collections::BTreeSet::new();
    for stage in 1..=5u8 {
        let tb = stage_testbed(stage);
        for sw in [SwitchSel::Sw1, SwitchSel::Sw2] {
            for port in net.ports(sw) {
                let (src, sip, dip) = net.sender(sw, port);
                for eth in [EthType::Ipv4, EthType::Arp] {
                    for dst in [net.server, net.t1, net.t2, net.client, MacAddr::BROADCAST] {
                        let pkt = match eth {
                            EthType::Ipv4 => PacketHeader::ipv4(src, dst, sip, dip, 1),
                            EthType::Arp => PacketHeader::arp(ArpOp::Request, src, dst, sip, dip),
                        }
                        .on_port(port);
                        let mut probe = tb.clone();
                        let got = observed(&probe.switch_mut(sw).process(&pkt));
                        let (want, flow) = net.expect(stage, sw, &pkt);
                        flows_hit.extend(flow);
                        cases += 1;
                        if got != want {
                            mismatches.push(format!("stage {stage} {} in={port} {eth:?} dst={dst}: got {got:?} want {want:?}", sw.name()));
                        }
                    }
                }
            }
        }
    }

    let mut extra = Vec::new();
    let tb = stage_testbed(3);
    // flow 1: the link copy is untouched, the transcoder 1 copy is readdressed
    let pkt = PacketHeader::ipv4(net.server, net.t2, net.server_ip, net.tc_ip, 5).on_port(SERVER_PORT);
    let v = tb.clone().sw1.process(&pkt);
    let e = v.emitted();
    let dup_ok = e.len() == 2
        && e[0].port == SW1_LINK_PORT
        && e[0].header == pkt
        && e[1].port == T1_PORT
        && e[1].header == PacketHeader { dst_mac: net.t1, ..pkt };
    if !dup_ok {
        extra.push(format!("flow 1 duplication: {v:?}"));
    }
    // flow 6
    let pkt = PacketHeader::ipv4(net.t2, net.client, net.tc_ip, net.client_ip, 5).on_port(T2_PORT);
    if tb.clone().sw2.process(&pkt) != (Verdict::RuleDrop { cookie: 9997 }) {
        extra.push("flow 6 does not drop".into());
    }

    // cutover replayed one flow at a time; each deletion must remove exactly
    // the rules carrying its cookie at that moment
    let mut tb = stage_testbed(4);
    tb.set_host_port(transmig_core::sim::Host::T1, false);
    for n in [9, 10, 7, 8] {
        let fm = tb.flow(n).unwrap().clone();
        let sw = if fm.switch() == "sw1" { SwitchSel::Sw1 } else { SwitchSel::Sw2 };
        match fm {
            FlowMod::Add { rule, .. } => {
                tb.switch_mut(sw).install_flow(rule);
            }
            FlowMod::Delete { cookie, mask, .. } => {
                let before = rules_of(&tb, sw);
                let (tagged, kept): (Vec<FlowRule>, Vec<FlowRule>) =
                    before.into_iter().partition(|r| r.cookie & mask == cookie & mask);
                let removed = tb.switch_mut(sw).delete_by_cookie(cookie, mask);
                if removed != tagged.len() || rules_of(&tb, sw) != kept || tagged.is_empty() {
                    extra.push(format!("flow {n} removed {removed} of {} tagged rules", tagged.len()));
                }
            }
        }
    }
    let reference = stage_testbed(5);
    for sw in [SwitchSel::Sw1, SwitchSel::Sw2] {
        if rules_of(&tb, sw) != rules_of(&reference, sw) {
            extra.push(format!("{} replay differs from the cutover step", sw.name()));
        }
        if rules_of(&tb, sw).iter().any(|r| r.cookie != 9999) {
            extra.push(format!("{} keeps a temporary rule", sw.name()));
        }
    }

    let all_flows = [1, 2, 3, 4, 5, 6, 7, 9].iter().all(|f| flows_hit.contains(f));
    report(
        6,
        mismatches.is_empty() && extra.is_empty() && all_flows,
        format!(
            "{}/{cases} packet classes match; flows exercised {flows_hit:?}; {}",
            cases - mismatches.len(),
            mismatches.iter().chain(&extra).cloned().collect::<Vec<_>>().join("; ")
        ),
    );
}

#[test]
fn c7_migration_gap_ordering() {
    let _g = serial();
    let start = Instant::now();
    let base = SimConfig::default();
    let rtts = [base.clone().with_rtt(0.125), base.clone().with_rtt(0.250)];
    let mean = |kind, configs: &[SimConfig]| -> Vec<f64> {
        sweep(configs, &[kind], 50, 0)
            .unwrap()
            .iter()
            .map(|c| {
                assert_eq!(c.incomplete, 0, "{} incomplete runs", kind.name());
                c.stats.unwrap().mean
            })
            .collect()
    };
    let of = mean(MigrationKind::Of, &rtts);
    let standard = mean(MigrationKind::Standard, &rtts[..1])[0];
    let flush = mean(MigrationKind::ArpFlushStandard, &rtts[..1])[0];
    let secs = start.elapsed().as_secs_f64();
    let ok = of[0] < 0.5
        && standard > 10.0
        && of[0] < flush
        && flush < standard
        && (of[0] - of[1]).abs() < base.transcoder_startup
        && secs < 120.0;
    report(
        7,
        ok,
        format!(
            "of {:.4}s (250ms rtt {:.4}s), arp-flush-standard {flush:.3}s, standard {standard:.3}s; {secs:.1}s",
            of[0], of[1]
        ),
    );
}

#[test]
fn c8_migration_invariants() {
    let _g = serial();
    let net = Net::new();
    let mut runs = 0;
    let mut bad = Vec::new();
    for kind in [MigrationKind::Of, MigrationKind::ArpFlushOf] {
        for seed in 0..50 {
            runs += 1;
            let run = run_migration(&SimConfig::default().with_seed(seed), kind).unwrap();
            let tag = format!("{} seed {seed}", kind.name());
            let Some(cut) = run.cutover_us else {
                bad.push(format!("{tag}: no cutover"));
                continue;
            };
            if run.client_log().iter().any(|r| r.src_mac == net.t2 && r.t_us < cut) {
                bad.push(format!("{tag}: transcoder 2 reached the client before the cutover"));
            }
            match &run.gap {
                Some(Ok(g)) if g.overlap_packets <= 20 => {}
                other => bad.push(format!("{tag}: gap {other:?}")),
            }
            for sw in [SwitchSel::Sw1, SwitchSel::Sw2] {
                if run.testbed.switch(sw).table().rules().any(|r| r.rewrites_headers()) {
                    bad.push(format!("{tag}: {} still rewrites headers", sw.name()));
                }
            }
            if run.server_mac_at_cutover != Some(net.t2) {
                bad.push(format!("{tag}: server ARP {:?} at cutover", run.server_mac_at_cutover));
            }
        }
    }
    report(8, bad.is_empty(), format!("{}/{runs} flow-assisted runs clean {}", runs - bad.len(), bad.join("; ")));
}

fn cli(args: &[&str], dir: &Path, tag: &str) -> Vec<Vec<u8>> {
    let out = dir.join(format!("{tag}.csv"));
    let clients = dir.join(format!("{tag}-clients.csv"));
    let trace = dir.join(format!("{tag}-trace.jsonl"));
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_transmig"));
    cmd.args(args).args(["--seed", "7", "--out"]).arg(&out);
    if args[0] == "migrate" {
        cmd.arg("--client-log").arg(&clients).arg("--trace").arg(&trace);
    } else {
        cmd.arg("--no-timing");
    }
    let res = cmd.output().unwrap();
    assert!(res.status.success(), "{args:?}: {}", String::from_utf8_lossy(&res.stderr));
    let mut files = vec![std::fs::read(&out).unwrap()];
    if args[0] == "migrate" {
        files.push(std::fs::read(&clients).unwrap());
        files.push(std::fs::read(&trace).unwrap());
    }
    files
}

#[test]
fn c9_reruns_are_byte_identical() {
    let _g = serial();
    let dir = tempfile::tempdir().unwrap();
    let commands: [&[&str]; 5] = [
        &["place", "--preset", "oracle-small", "--solver", "ga"],
        &["compare", "--preset", "oracle-small"],
        &["migrate", "--preset", "table1", "--reps", "10"],
        &["benefit", "--preset", "fig6-clients"],
        &["sweep", "--preset", "fig6-clients"],
    ];
    let mut differing = Vec::new();
    for (i, args) in commands.iter().enumerate() {
        let a = cli(args, dir.path(), &format!("{i}a"));
        let b = cli(args, dir.path(), &format!("{i}b"));
        if a != b || a.iter().any(|f| f.is_empty()) {
            differing.push(args[0]);
        }
    }
    report(
        9,
        differing.is_empty(),
        format!("{}/{} subcommands reproduce exactly {differing:?}", commands.len() - differing.len(), commands.len()),
    );
}

use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{ticks, ConfigError, MigrationKind, SimConfig};
use super::gap::{measure_gap, GapReport, IncompleteMigration};
use super::queue::EventQueue;
use super::testbed::{Attachment, Host, OfStep, SwitchSel, Testbed, TestbedError, MIGRATION_FLOWS};
use super::trace::{ClientRecord, IgnoreReason, Site, SwitchOutcome, Trace, TraceKind, TranscoderState};
use crate::fabric::{ArpOp, EthType, MacAddr, PacketHeader, Verdict};

#[derive(Clone, Debug, PartialEq)]
pub enum SimError {
    Config(ConfigError),
    Testbed(TestbedError),
}

impl fmt::Display for SimError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimError::Config(e) => e.fmt(f),
            SimError::Testbed(e) => e.fmt(f),
        }
    }
}

impl core::error::Error for SimError {}

impl From<ConfigError> for SimError {
    fn from(e: ConfigError) -> Self {
        SimError::Config(e)
    }
}

impl From<TestbedError> for SimError {
    fn from(e: TestbedError) -> Self {
        SimError::Testbed(e)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimRun {
    pub kind: Option<MigrationKind>,
    pub config: SimConfig,
    pub trace: Trace,
    /// Fabric state when the run ended.
    pub testbed: Testbed,
    /// When the old transcoder was cut off.
    pub cutover_us: Option<u64>,
    /// Server's ARP entry for the transcoder address just before the cutover.
    pub server_mac_at_cutover: Option<MacAddr>,
    pub unsafe_switchover: bool,
    pub gap: Option<Result<GapReport, IncompleteMigration>>,
}

impl SimRun {
    pub fn client_log(&self) -> &[ClientRecord] {
        &self.trace.client_log
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum Stage {
    Of(u8),
    Standard,
}

#[derive(Clone, Debug)]
enum Event {
    ServerSend,
    ArpProbe,
    ArpRetry,
    AtSwitch(SwitchSel, PacketHeader),
    AtHost(Host, PacketHeader),
    Ready(Host, u64),
    Stage(Stage),
}

#[derive(Copy, Clone, Debug)]
struct ArpEntry {
    mac: MacAddr,
    expires_at: u64,
}

struct Sim {
    cfg: SimConfig,
    now: u64,
    end: u64,
    queue: EventQueue<Event>,
    bed: Testbed,
    trace: Trace,
    flush_arp: bool,
    residual: u64,
    interval: u64,
    link_delay: u64,
    host_delay: u64,
    arp: Option<ArpEntry>,
    resolving: bool,
    next_seq: u64,
    t1: TranscoderState,
    t2: TranscoderState,
    cutover_us: Option<u64>,
    server_mac_at_cutover: Option<MacAddr>,
}

fn is_video(h: &PacketHeader, server: core::net::Ipv4Addr) -> bool {
    h.eth_type == EthType::Ipv4 && h.src_ip == server
}

impl Sim {
    fn new(cfg: &SimConfig, bed: Testbed, flush_arp: bool) -> Result<Self, SimError> {
        cfg.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let interval = ticks(1.0 / cfg.packet_rate);
        // drawn up front so every kind consumes the stream identically
        let stream_phase = rng.gen_range(0..interval);
        let probe_phase = rng.gen_range(0..ticks(cfg.arp_refresh).max(1));
        let drawn_residual = rng.gen_range(0.0..cfg.arp_timeout);
        let residual = ticks(cfg.arp_residual.unwrap_or(drawn_residual));

        let arp = Some(ArpEntry {
            mac: bed.addrs.t1_mac,
            expires_at: ticks(cfg.arp_timeout),
        });
        let mut sim = Self {
            cfg: cfg.clone(),
            now: 0,
            end: ticks(cfg.sim_duration),
            queue: EventQueue::new(),
            bed,
            trace: Trace::default(),
            flush_arp,
            residual,
            interval,
            link_delay: ticks(cfg.link_rtt / 2.0),
            host_delay: ticks(cfg.host_latency),
            arp,
            resolving: false,
            next_seq: 0,
            t1: TranscoderState::Streaming,
            t2: TranscoderState::Off,
            cutover_us: None,
            server_mac_at_cutover: None,
        };
        sim.queue.push(stream_phase, Event::ServerSend);
        sim.queue.push(probe_phase, Event::ArpProbe);
        Ok(sim)
    }

    fn schedule_stages(&mut self, kind: MigrationKind) {
        let t1 = ticks(self.cfg.migration_start);
        if kind.uses_flows() {
            let t3 = t1 + ticks(self.cfg.wait1);
            let t5 = t3 + ticks(self.cfg.wait2);
            for (t, s) in [(t1, 1), (t1, 2), (t3, 3), (t3, 4), (t5, 5)] {
                self.queue.push(t, Event::Stage(Stage::Of(s)));
            }
        } else {
            self.queue.push(t1, Event::Stage(Stage::Standard));
        }
    }

    fn record(&mut self, site: Site, kind: TraceKind) {
        self.trace.push(self.now, site, kind);
    }

    fn state_mut(&mut self, host: Host) -> &mut TranscoderState {
        match host {
            Host::T2 => &mut self.t2,
            _ => &mut self.t1,
        }
    }

    fn set_transcoder(&mut self, host: Host, state: TranscoderState) {
        *self.state_mut(host) = state;
        self.record(Site::Host(host), TraceKind::Transcoder(state));
    }

    fn send(&mut self, host: Host, header: PacketHeader) {
        let (sw, port) = Testbed::host_port(host);
        self.record(Site::Host(host), TraceKind::PacketTx(header));
        self.queue.push(self.now + self.host_delay, Event::AtSwitch(sw, header.on_port(port)));
    }

    fn arp_valid(&self) -> Option<MacAddr> {
        self.arp.filter(|e| e.expires_at > self.now).map(|e| e.mac)
    }

    fn broadcast_request(&mut self) {
        let a = self.bed.addrs;
        self.send(
            Host::Server,
            PacketHeader::arp(ArpOp::Request, a.server_mac, MacAddr::BROADCAST, a.server_ip, a.transcoder_ip),
        );
        self.queue.push(self.now + ticks(self.cfg.arp_retry), Event::ArpRetry);
    }

    fn server_send(&mut self) {
        let seq = self.next_seq;
        self.next_seq += 1;
        let a = self.bed.addrs;
        match self.arp_valid() {
            Some(mac) => {
                let mut h = PacketHeader::ipv4(a.server_mac, mac, a.server_ip, a.transcoder_ip, seq);
                h.stream_id = 1;
                self.send(Host::Server, h);
            }
            None => {
                self.record(Site::Host(Host::Server), TraceKind::Unresolved { seq });
                if !self.resolving {
                    self.resolving = true;
                    self.broadcast_request();
                }
            }
        }
        if self.now + self.interval < self.end {
            self.queue.push(self.now + self.interval, Event::ServerSend);
        }
    }

    fn arp_probe(&mut self) {
        if let Some(mac) = self.arp_valid() {
            let a = self.bed.addrs;
            self.send(
                Host::Server,
                PacketHeader::arp(ArpOp::Request, a.server_mac, mac, a.server_ip, a.transcoder_ip),
            );
        }
        let next = self.now + ticks(self.cfg.arp_refresh);
        if next < self.end {
            self.queue.push(next, Event::ArpProbe);
        }
    }

    fn at_switch(&mut self, sel: SwitchSel, header: PacketHeader) {
        let verdict = self.bed.switch_mut(sel).process(&header);
        let outcome = match &verdict {
            Verdict::IngressDisabled => SwitchOutcome::IngressDisabled,
            Verdict::RuleDrop { cookie } => SwitchOutcome::RuleDrop { cookie: *cookie },
            Verdict::Filtered => SwitchOutcome::Filtered,
            Verdict::Forwarded { cookie, result } => SwitchOutcome::Forwarded {
                cookie: *cookie,
                out: result.emitted.iter().map(|e| e.port).collect(),
                discarded: result.discarded.clone(),
            },
        };
        self.record(Site::Switch(sel), TraceKind::SwitchArrival { header, outcome });
        for e in verdict.emitted() {
            match Testbed::attachment(sel, e.port) {
                Some(Attachment::Host(h)) => self.queue.push(self.now + self.host_delay, Event::AtHost(h, e.header)),
                Some(Attachment::Link(peer, port)) => {
                    self.queue.push(self.now + self.link_delay, Event::AtSwitch(peer, e.header.on_port(port)))
                }
                None => self.record(Site::Switch(sel), TraceKind::Warning("emission on an unwired port")),
            }
        }
    }

    fn ignore(&mut self, host: Host, header: PacketHeader, reason: IgnoreReason) {
        self.record(Site::Host(host), TraceKind::HostIgnored { header, reason });
    }

    fn at_host(&mut self, host: Host, h: PacketHeader) {
        let a = self.bed.addrs;
        let me = a.mac(host);
        match host {
            Host::Server => {
                if h.eth_type == EthType::Arp && h.arp_op == Some(ArpOp::Reply) && h.dst_ip == a.server_ip {
                    self.record(Site::Host(host), TraceKind::HostRx(h));
                    let expires_at = self.now + ticks(self.cfg.arp_timeout);
                    self.arp = Some(ArpEntry { mac: h.src_mac, expires_at });
                    self.resolving = false;
                    self.record(Site::Host(host), TraceKind::ArpUpdate { mac: h.src_mac, expires_at });
                } else {
                    self.ignore(host, h, IgnoreReason::NotForUs);
                }
            }
            Host::Client => {
                if h.eth_type == EthType::Ipv4 && h.dst_mac == me {
                    self.record(Site::Host(host), TraceKind::HostRx(h));
                    self.trace.client_log.push(ClientRecord {
                        t_us: self.now,
                        src_mac: h.src_mac,
                        seq: h.seq,
                    });
                } else {
                    self.ignore(host, h, IgnoreReason::NotForUs);
                }
            }
            Host::T1 | Host::T2 => {
                let state = *self.state_mut(host);
                if state == TranscoderState::Off {
                    return self.ignore(host, h, IgnoreReason::Off);
                }
                match h.eth_type {
                    // requests are answered on target address alone, so a
                    // probe aimed at the other transcoder's MAC still resolves
                    EthType::Arp if h.arp_op == Some(ArpOp::Request) && h.dst_ip == a.transcoder_ip => {
                        self.record(Site::Host(host), TraceKind::HostRx(h));
                        self.send(
                            host,
                            PacketHeader::arp(ArpOp::Reply, me, h.src_mac, a.transcoder_ip, h.src_ip),
                        );
                    }
                    EthType::Ipv4 if h.dst_mac == me && h.dst_ip == a.transcoder_ip => {
                        self.record(Site::Host(host), TraceKind::HostRx(h));
                        match state {
                            TranscoderState::Buffering { since: None } => {
                                self.set_transcoder(host, TranscoderState::Buffering { since: Some(self.now) });
                                self.queue.push(
                                    self.now + ticks(self.cfg.transcoder_startup),
                                    Event::Ready(host, self.now),
                                );
                            }
                            TranscoderState::Streaming => {
                                let mut out = PacketHeader::ipv4(me, a.client_mac, a.transcoder_ip, a.client_ip, h.seq);
                                out.stream_id = h.stream_id;
                                self.send(host, out);
                            }
                            _ => {}
                        }
                    }
                    _ => self.ignore(host, h, IgnoreReason::NotForUs),
                }
            }
        }
    }

    fn ready(&mut self, host: Host, since: u64) {
        if *self.state_mut(host) == (TranscoderState::Buffering { since: Some(since) }) {
            self.set_transcoder(host, TranscoderState::Streaming);
        }
    }

    /// Leaves a stale entry for the dead transcoder with a random remaining
    /// lifetime, or removes it when flushing.
    fn age_arp(&mut self) {
        let old = self.bed.addrs.t1_mac;
        if self.flush_arp {
            self.arp = None;
            self.record(Site::Host(Host::Server), TraceKind::ArpStale { expires_at: None });
        } else if let Some(e) = self.arp.as_mut().filter(|e| e.mac == old) {
            e.expires_at = e.expires_at.min(self.now + self.residual);
            let expires_at = Some(e.expires_at);
            self.record(Site::Host(Host::Server), TraceKind::ArpStale { expires_at });
        }
    }

    fn fabric(&mut self, step: OfStep) {
        for change in self.bed.apply_of_step(step) {
            self.record(Site::Controller, TraceKind::Fabric(change));
        }
    }

    fn begin_cutover(&mut self) {
        self.cutover_us = Some(self.now);
        self.server_mac_at_cutover = self.arp_valid();
    }

    fn stage(&mut self, stage: Stage) {
        match stage {
            Stage::Of(n) => {
                self.record(Site::Controller, TraceKind::Stage(n));
                match n {
                    1 => {
                        self.fabric(OfStep::EnableTarget);
                        self.set_transcoder(Host::T2, TranscoderState::Buffering { since: None });
                    }
                    3 => self.fabric(OfStep::InstallDuplication),
                    5 => {
                        self.begin_cutover();
                        self.set_transcoder(Host::T1, TranscoderState::Off);
                        self.fabric(OfStep::Cutover);
                        self.age_arp();
                    }
                    _ => {}
                }
            }
            Stage::Standard => {
                self.record(Site::Controller, TraceKind::Stage(0));
                self.begin_cutover();
                self.set_transcoder(Host::T1, TranscoderState::Off);
                let c = self.bed.set_host_port(Host::T1, false);
                self.record(Site::Controller, TraceKind::Fabric(c));
                self.age_arp();
                let c = self.bed.set_host_port(Host::T2, true);
                self.record(Site::Controller, TraceKind::Fabric(c));
                self.set_transcoder(Host::T2, TranscoderState::Buffering { since: None });
            }
        }
    }

    fn run(mut self, kind: Option<MigrationKind>) -> SimRun {
        if let Some(k) = kind {
            self.schedule_stages(k);
        }
        while let Some(t) = self.queue.peek_time() {
            if t > self.end {
                break;
            }
            let Some((t, event)) = self.queue.pop() else { break };
            self.now = t;
            match event {
                Event::ServerSend => self.server_send(),
                Event::ArpProbe => self.arp_probe(),
                Event::ArpRetry => {
                    if self.resolving {
                        self.broadcast_request();
                    }
                }
                Event::AtSwitch(sel, h) => self.at_switch(sel, h),
                Event::AtHost(host, h) => self.at_host(host, h),
                Event::Ready(host, since) => self.ready(host, since),
                Event::Stage(s) => self.stage(s),
            }
        }
        let server_ip = self.bed.addrs.server_ip;
        self.trace.in_flight_at_end = self
            .queue
            .drain()
            .filter(|(_, e)| match e {
                Event::AtSwitch(_, h) | Event::AtHost(_, h) => is_video(h, server_ip),
                _ => false,
            })
            .count();

        let a = self.bed.addrs;
        let gap = kind.map(|_| measure_gap(&self.trace.client_log, a.t1_mac, a.t2_mac));
        SimRun {
            kind,
            unsafe_switchover: kind.is_some_and(|k| k.uses_flows()) && self.cfg.unsafe_switchover(),
            config: self.cfg,
            trace: self.trace,
            testbed: self.bed,
            cutover_us: self.cutover_us,
            server_mac_at_cutover: self.server_mac_at_cutover,
            gap,
        }
    }
}

fn default_testbed() -> Result<Testbed, SimError> {
    Ok(Testbed::new(MIGRATION_FLOWS)?)
}

/// Steady-state streaming through transcoder 1 with no migration.
pub fn run_stream(cfg: &SimConfig) -> Result<SimRun, SimError> {
    Ok(Sim::new(cfg, default_testbed()?, false)?.run(None))
}

/// Runs one migration of `kind` on a given testbed.
pub fn run_migration_on(cfg: &SimConfig, kind: MigrationKind, testbed: Testbed) -> Result<SimRun, SimError> {
    Ok(Sim::new(cfg, testbed, kind.flushes_arp())?.run(Some(kind)))
}

pub fn run_migration(cfg: &SimConfig, kind: MigrationKind) -> Result<SimRun, SimError> {
    run_migration_on(cfg, kind, default_testbed()?)
}

/// The five-stage flow-assisted migration.
pub fn run_of_migration(cfg: &SimConfig, flush_arp: bool) -> Result<SimRun, SimError> {
    let kind = if flush_arp { MigrationKind::ArpFlushOf } else { MigrationKind::Of };
    run_migration(cfg, kind)
}

/// Kill-and-restart migration that relies on the server's ARP cache.
pub fn run_standard_migration(cfg: &SimConfig, flush_arp: bool) -> Result<SimRun, SimError> {
    let kind = if flush_arp { MigrationKind::ArpFlushStandard } else { MigrationKind::Standard };
    run_migration(cfg, kind)
}

/// Each client arrival as `(t_us, microseconds since the previous arrival)`.
pub fn client_deltas(log: &[ClientRecord]) -> Vec<(u64, u64)> {
    let mut prev = None;
    log.iter()
        .map(|r| {
            let d = prev.map_or(0, |p| r.t_us - p);
            prev = Some(r.t_us);
            (r.t_us, d)
        })
        .collect()
}

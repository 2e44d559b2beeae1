use alloc::vec::Vec;
use core::fmt;
use core::net::Ipv4Addr;

use crate::fabric::{parse_flow_mods, Bindings, FlowMod, FlowModError, MacAddr, NumberedMod, PortId, SwitchModel};

/// Default migration listing: temporary rules carry the cookie their
/// deletion targets.
pub const MIGRATION_FLOWS: &str = include_str!("../../flows/migration.flows");
/// The same listing with every cookie as printed for the hardware testbed.
pub const MIGRATION_FLOWS_PRINTED: &str = include_str!("../../flows/migration-printed.flows");

pub const SERVER_PORT: PortId = PortId(1);
pub const T1_PORT: PortId = PortId(2);
pub const SW1_LINK_PORT: PortId = PortId(10);
pub const SW2_LINK_PORT: PortId = PortId(20);
pub const T2_PORT: PortId = PortId(21);
pub const CLIENT_PORT: PortId = PortId(22);

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SwitchSel {
    Sw1,
    Sw2,
}

impl SwitchSel {
    pub fn name(self) -> &'static str {
        match self {
            SwitchSel::Sw1 => "sw1",
            SwitchSel::Sw2 => "sw2",
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Host {
    Server,
    T1,
    T2,
    Client,
}

impl Host {
    pub const ALL: [Host; 4] = [Host::Server, Host::T1, Host::T2, Host::Client];

    pub fn name(self) -> &'static str {
        match self {
            Host::Server => "server",
            Host::T1 => "transcoder1",
            Host::T2 => "transcoder2",
            Host::Client => "client",
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Attachment {
    Host(Host),
    Link(SwitchSel, PortId),
}

/// Addressing of the four endpoints. Both transcoders answer for one IP.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Addresses {
    pub server_mac: MacAddr,
    pub t1_mac: MacAddr,
    pub t2_mac: MacAddr,
    pub client_mac: MacAddr,
    pub server_ip: Ipv4Addr,
    pub transcoder_ip: Ipv4Addr,
    pub client_ip: Ipv4Addr,
}

impl Default for Addresses {
    fn default() -> Self {
        Self {
            server_mac: MacAddr([2, 0, 0, 0, 0, 0x01]),
            t1_mac: MacAddr([2, 0, 0, 0, 0, 0x11]),
            t2_mac: MacAddr([2, 0, 0, 0, 0, 0x12]),
            client_mac: MacAddr([2, 0, 0, 0, 0, 0x21]),
            server_ip: Ipv4Addr::new(10, 0, 0, 1),
            transcoder_ip: Ipv4Addr::new(10, 0, 0, 2),
            client_ip: Ipv4Addr::new(10, 0, 0, 3),
        }
    }
}

impl Addresses {
    pub fn mac(&self, host: Host) -> MacAddr {
        match host {
            Host::Server => self.server_mac,
            Host::T1 => self.t1_mac,
            Host::T2 => self.t2_mac,
            Host::Client => self.client_mac,
        }
    }

    pub fn ip(&self, host: Host) -> Ipv4Addr {
        match host {
            Host::Server => self.server_ip,
            Host::T1 | Host::T2 => self.transcoder_ip,
            Host::Client => self.client_ip,
        }
    }

    /// Values for the symbolic names used in the flow listings.
    pub fn bindings(&self) -> Bindings {
        let mut b = Bindings::new();
        b.bind("serverPORT", SERVER_PORT)
            .bind("transcoder1PORT", T1_PORT)
            .bind("sw1LinkPORT", SW1_LINK_PORT)
            .bind("sw2LinkPORT", SW2_LINK_PORT)
            .bind("transcoder2PORT", T2_PORT)
            .bind("clientPORT", CLIENT_PORT)
            .bind("serverIP", self.server_ip)
            .bind("transcoderIP", self.transcoder_ip)
            .bind("clientIP", self.client_ip)
            .bind("transcoder1MAC", self.t1_mac)
            .bind("transcoder2MAC", self.t2_mac)
            .bind("sw1Name", SwitchSel::Sw1.name())
            .bind("sw2Name", SwitchSel::Sw2.name());
        b
    }
}

/// Flow numbers applied at the duplication stage and at the cutover.
pub const DUPLICATION_FLOWS: [u32; 6] = [1, 2, 3, 4, 5, 6];
pub const CUTOVER_FLOWS: [u32; 4] = [7, 8, 9, 10];

/// Fabric actions of the flow-assisted migration.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum OfStep {
    /// Bring up the new transcoder's switch port.
    EnableTarget,
    /// Duplicate the stream toward both transcoders.
    InstallDuplication,
    /// Cut the old transcoder off and retire the temporary rules.
    Cutover,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FabricChange {
    PortSet { switch: SwitchSel, port: PortId, enabled: bool },
    Installed { switch: SwitchSel, flow: u32, cookie: u64, replaced: bool },
    Deleted { switch: SwitchSel, flow: u32, cookie: u64, mask: u64, removed: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TestbedError {
    Flows(FlowModError),
    MissingFlow(u32),
    UnknownSwitch { flow: u32 },
}

impl fmt::Display for TestbedError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestbedError::Flows(e) => write!(f, "flow listing: {e}"),
            TestbedError::MissingFlow(n) => write!(f, "flow listing has no flow {n}"),
            TestbedError::UnknownSwitch { flow } => write!(f, "flow {flow} names an unknown switch"),
        }
    }
}

impl core::error::Error for TestbedError {}

impl From<FlowModError> for TestbedError {
    fn from(e: FlowModError) -> Self {
        TestbedError::Flows(e)
    }
}

/// Two switches joined by one link: server and transcoder 1 on the first,
/// transcoder 2 and the client on the second.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Testbed {
    pub sw1: SwitchModel,
    pub sw2: SwitchModel,
    pub addrs: Addresses,
    flows: Vec<(SwitchSel, NumberedMod)>,
}

impl Testbed {
    /// Steady state before any migration: transcoder 2's port is down and the
    /// learning tables already know every endpoint.
    pub fn new(flows_text: &str) -> Result<Self, TestbedError> {
        let addrs = Addresses::default();
        let parsed = parse_flow_mods(flows_text, &addrs.bindings())?;
        let mut flows = Vec::with_capacity(parsed.len());
        for m in parsed {
            let sel = match m.flow_mod.switch() {
                "sw1" => SwitchSel::Sw1,
                "sw2" => SwitchSel::Sw2,
                _ => return Err(TestbedError::UnknownSwitch { flow: m.flow }),
            };
            flows.push((sel, m));
        }
        for n in DUPLICATION_FLOWS.iter().chain(&CUTOVER_FLOWS) {
            if !flows.iter().any(|(_, m)| m.flow == *n) {
                return Err(TestbedError::MissingFlow(*n));
            }
        }

        let mut sw1 = SwitchModel::new(SwitchSel::Sw1.name());
        let mut sw2 = SwitchModel::new(SwitchSel::Sw2.name());
        // ids are fresh, so these cannot collide
        let _ = sw1.add_port(SERVER_PORT, "server", true);
        let _ = sw1.add_port(T1_PORT, "transcoder1", true);
        let _ = sw1.add_port(SW1_LINK_PORT, "link", true);
        let _ = sw2.add_port(SW2_LINK_PORT, "link", true);
        let _ = sw2.add_port(T2_PORT, "transcoder2", false);
        let _ = sw2.add_port(CLIENT_PORT, "client", true);

        sw1.learn(addrs.server_mac, SERVER_PORT);
        sw1.learn(addrs.t1_mac, T1_PORT);
        sw1.learn(addrs.t2_mac, SW1_LINK_PORT);
        sw1.learn(addrs.client_mac, SW1_LINK_PORT);
        sw2.learn(addrs.server_mac, SW2_LINK_PORT);
        sw2.learn(addrs.t1_mac, SW2_LINK_PORT);
        sw2.learn(addrs.t2_mac, T2_PORT);
        sw2.learn(addrs.client_mac, CLIENT_PORT);

        Ok(Self { sw1, sw2, addrs, flows })
    }

    pub fn switch(&self, sel: SwitchSel) -> &SwitchModel {
        match sel {
            SwitchSel::Sw1 => &self.sw1,
            SwitchSel::Sw2 => &self.sw2,
        }
    }

    pub fn switch_mut(&mut self, sel: SwitchSel) -> &mut SwitchModel {
        match sel {
            SwitchSel::Sw1 => &mut self.sw1,
            SwitchSel::Sw2 => &mut self.sw2,
        }
    }

    pub fn flow(&self, n: u32) -> Option<&FlowMod> {
        self.flows.iter().find(|(_, m)| m.flow == n).map(|(_, m)| &m.flow_mod)
    }

    pub fn host_port(host: Host) -> (SwitchSel, PortId) {
        match host {
            Host::Server => (SwitchSel::Sw1, SERVER_PORT),
            Host::T1 => (SwitchSel::Sw1, T1_PORT),
            Host::T2 => (SwitchSel::Sw2, T2_PORT),
            Host::Client => (SwitchSel::Sw2, CLIENT_PORT),
        }
    }

    pub fn attachment(sel: SwitchSel, port: PortId) -> Option<Attachment> {
        match (sel, port) {
            (SwitchSel::Sw1, SW1_LINK_PORT) => Some(Attachment::Link(SwitchSel::Sw2, SW2_LINK_PORT)),
            (SwitchSel::Sw2, SW2_LINK_PORT) => Some(Attachment::Link(SwitchSel::Sw1, SW1_LINK_PORT)),
            _ => Host::ALL
                .into_iter()
                .find(|&h| Self::host_port(h) == (sel, port))
                .map(Attachment::Host),
        }
    }

    /// Enables or disables the switch port a host hangs off.
    pub fn set_host_port(&mut self, host: Host, enabled: bool) -> FabricChange {
        let (switch, port) = Self::host_port(host);
        // every host port exists
        let _ = self.switch_mut(switch).set_port(port, enabled);
        FabricChange::PortSet { switch, port, enabled }
    }

    fn apply_flows(&mut self, numbers: &[u32], out: &mut Vec<FabricChange>) {
        let mut picked: Vec<(SwitchSel, NumberedMod)> =
            self.flows.iter().filter(|(_, m)| numbers.contains(&m.flow)).cloned().collect();
        // one batch per switch, first switch first
        picked.sort_by_key(|(sel, _)| *sel);
        for (switch, m) in picked {
            let sw = self.switch_mut(switch);
            out.push(match m.flow_mod {
                FlowMod::Add { rule, .. } => {
                    let cookie = rule.cookie;
                    let replaced = sw.install_flow(rule) == crate::fabric::Installed::Replaced;
                    FabricChange::Installed { switch, flow: m.flow, cookie, replaced }
                }
                FlowMod::Delete { cookie, mask, .. } => {
                    let removed = sw.delete_by_cookie(cookie, mask);
                    FabricChange::Deleted { switch, flow: m.flow, cookie, mask, removed }
                }
            });
        }
    }

    /// Applies one fabric step of the flow-assisted migration.
    pub fn apply_of_step(&mut self, step: OfStep) -> Vec<FabricChange> {
        let mut out = Vec::new();
        match step {
            OfStep::EnableTarget => out.push(self.set_host_port(Host::T2, true)),
            OfStep::InstallDuplication => self.apply_flows(&DUPLICATION_FLOWS, &mut out),
            OfStep::Cutover => {
                out.push(self.set_host_port(Host::T1, false));
                self.apply_flows(&CUTOVER_FLOWS, &mut out);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listings_load() {
        let tb = Testbed::new(MIGRATION_FLOWS).unwrap();
        assert!(!tb.sw2.is_enabled(T2_PORT));
        assert!(tb.sw1.table().is_empty());
        Testbed::new(MIGRATION_FLOWS_PRINTED).unwrap();
        assert_eq!(Testbed::new("1 add-flow sw1Name cookie=1 actions=").unwrap_err(), TestbedError::MissingFlow(2));
    }

    #[test]
    fn wiring_is_symmetric() {
        for h in Host::ALL {
            let (s, p) = Testbed::host_port(h);
            assert_eq!(Testbed::attachment(s, p), Some(Attachment::Host(h)));
        }
        assert_eq!(
            Testbed::attachment(SwitchSel::Sw2, SW2_LINK_PORT),
            Some(Attachment::Link(SwitchSel::Sw1, SW1_LINK_PORT))
        );
        assert_eq!(Testbed::attachment(SwitchSel::Sw1, PortId(99)), None);
    }

    #[test]
    fn cutover_order_is_switch1_first() {
        let mut tb = Testbed::new(MIGRATION_FLOWS).unwrap();
        tb.apply_of_step(OfStep::EnableTarget);
        tb.apply_of_step(OfStep::InstallDuplication);
        let changes = tb.apply_of_step(OfStep::Cutover);
        let flows: Vec<u32> = changes
            .iter()
            .filter_map(|c| match c {
                FabricChange::Installed { flow, .. } | FabricChange::Deleted { flow, .. } => Some(*flow),
                _ => None,
            })
            .collect();
        assert_eq!(flows, [9, 10, 7, 8]);
    }
}

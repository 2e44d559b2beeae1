use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::table::{Action, FlowRule, FlowTable, Installed};
use super::{MacAddr, PacketHeader, PortId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Port {
    pub name: String,
    pub enabled: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Discard {
    PortDisabled,
    UnknownPort,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Emission {
    pub port: PortId,
    pub header: PacketHeader,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ActionResult {
    pub emitted: Vec<Emission>,
    pub discarded: Vec<(PortId, Discard)>,
}

/// What a switch did with one arriving packet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    IngressDisabled,
    /// Matched a rule whose action list drops.
    RuleDrop { cookie: u64 },
    /// Miss whose learned egress is the ingress port.
    Filtered,
    /// `cookie` is `None` when the packet took the default path.
    Forwarded { cookie: Option<u64>, result: ActionResult },
}

impl Verdict {
    pub fn emitted(&self) -> &[Emission] {
        match self {
            Verdict::Forwarded { result, .. } => &result.emitted,
            _ => &[],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SwitchError {
    UnknownPort(PortId),
    DuplicatePort(PortId),
}

impl fmt::Display for SwitchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SwitchError::UnknownPort(p) => write!(f, "unknown port {p}"),
            SwitchError::DuplicatePort(p) => write!(f, "port {p} already exists"),
        }
    }
}

impl core::error::Error for SwitchError {}

/// One OpenFlow-style switch. Table misses fall back to a learning switch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwitchModel {
    pub name: String,
    ports: BTreeMap<PortId, Port>,
    table: FlowTable,
    learned: BTreeMap<MacAddr, PortId>,
}

impl SwitchModel {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ports: BTreeMap::new(),
            table: FlowTable::new(),
            learned: BTreeMap::new(),
        }
    }

    pub fn add_port(&mut self, id: PortId, name: impl Into<String>, enabled: bool) -> Result<(), SwitchError> {
        if self.ports.contains_key(&id) {
            return Err(SwitchError::DuplicatePort(id));
        }
        self.ports.insert(id, Port { name: name.into(), enabled });
        Ok(())
    }

    pub fn port(&self, id: PortId) -> Option<&Port> {
        self.ports.get(&id)
    }

    pub fn ports(&self) -> impl Iterator<Item = (PortId, &Port)> {
        self.ports.iter().map(|(&id, p)| (id, p))
    }

    pub fn is_enabled(&self, id: PortId) -> bool {
        self.ports.get(&id).is_some_and(|p| p.enabled)
    }

    pub fn set_port(&mut self, id: PortId, enabled: bool) -> Result<(), SwitchError> {
        let port = self.ports.get_mut(&id).ok_or(SwitchError::UnknownPort(id))?;
        port.enabled = enabled;
        Ok(())
    }

    pub fn table(&self) -> &FlowTable {
        &self.table
    }

    pub fn install_flow(&mut self, rule: FlowRule) -> Installed {
        self.table.install(rule)
    }

    pub fn delete_by_cookie(&mut self, cookie: u64, mask: u64) -> usize {
        self.table.delete_by_cookie(cookie, mask)
    }

    /// Pre-populates the learning table.
    pub fn learn(&mut self, mac: MacAddr, port: PortId) {
        self.learned.insert(mac, port);
    }

    pub fn learned_port(&self, mac: MacAddr) -> Option<PortId> {
        self.learned.get(&mac).copied()
    }

    fn output(&self, port: PortId, header: PacketHeader, out: &mut ActionResult) {
        match self.ports.get(&port) {
            None => out.discarded.push((port, Discard::UnknownPort)),
            Some(p) if !p.enabled => out.discarded.push((port, Discard::PortDisabled)),
            Some(_) => out.emitted.push(Emission { port, header }),
        }
    }

    /// Runs an action list in order. A destination rewrite only applies to
    /// outputs that come after it.
    pub fn apply_actions(&self, pkt: &PacketHeader, actions: &[Action]) -> ActionResult {
        let mut out = ActionResult::default();
        if actions.is_empty() || actions.contains(&Action::Drop) {
            return out;
        }
        let mut header = *pkt;
        for action in actions {
            match *action {
                Action::Output(port) => self.output(port, header, &mut out),
                Action::ModDstMac(mac) => header.dst_mac = mac,
                Action::Drop => unreachable!(),
            }
        }
        out
    }

    /// Handles one packet arriving on `pkt.in_port`.
    pub fn process(&mut self, pkt: &PacketHeader) -> Verdict {
        if !self.is_enabled(pkt.in_port) {
            return Verdict::IngressDisabled;
        }
        if let Some(rule) = self.table.lookup(pkt) {
            if rule.is_drop() {
                return Verdict::RuleDrop { cookie: rule.cookie };
            }
            let cookie = rule.cookie;
            let result = self.apply_actions(pkt, &rule.actions);
            return Verdict::Forwarded { cookie: Some(cookie), result };
        }
        self.default_forward(pkt)
    }

    fn default_forward(&mut self, pkt: &PacketHeader) -> Verdict {
        if !pkt.src_mac.is_broadcast() {
            self.learned.insert(pkt.src_mac, pkt.in_port);
        }
        let mut result = ActionResult::default();
        match self.learned.get(&pkt.dst_mac).copied() {
            Some(port) if port == pkt.in_port => return Verdict::Filtered,
            Some(port) => self.output(port, *pkt, &mut result),
            None => {
                for (&id, p) in &self.ports {
                    if id != pkt.in_port && p.enabled {
                        result.emitted.push(Emission { port: id, header: *pkt });
                    }
                }
            }
        }
        Verdict::Forwarded { cookie: None, result }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fabric::FlowMatch;
    use alloc::vec;
    use core::net::Ipv4Addr;

    const A: MacAddr = MacAddr([2, 0, 0, 0, 0, 1]);
    const B: MacAddr = MacAddr([2, 0, 0, 0, 0, 2]);
    const C: MacAddr = MacAddr([2, 0, 0, 0, 0, 3]);

    fn sw() -> SwitchModel {
        let mut s = SwitchModel::new("s");
        for p in 1..=3 {
            s.add_port(PortId(p), "p", true).unwrap();
        }
        s
    }

    fn pkt(src: MacAddr, dst: MacAddr, port: u32) -> PacketHeader {
        PacketHeader::ipv4(src, dst, Ipv4Addr::new(10, 0, 0, 1), Ipv4Addr::new(10, 0, 0, 2), 7).on_port(PortId(port))
    }

    fn ports(v: &Verdict) -> Vec<u32> {
        v.emitted().iter().map(|e| e.port.0).collect()
    }

    #[test]
    fn rewrite_applies_to_later_outputs_only() {
        let s = sw();
        let acts = [Action::Output(PortId(2)), Action::ModDstMac(C), Action::Output(PortId(3))];
        let r = s.apply_actions(&pkt(A, B, 1), &acts);
        assert_eq!(r.emitted.len(), 2);
        assert_eq!(r.emitted[0].header.dst_mac, B);
        assert_eq!(r.emitted[1].header.dst_mac, C);
        assert!(s.apply_actions(&pkt(A, B, 1), &[]).emitted.is_empty());
    }

    #[test]
    fn unknown_and_disabled_outputs_are_discarded() {
        let mut s = sw();
        s.set_port(PortId(3), false).unwrap();
        let r = s.apply_actions(&pkt(A, B, 1), &[Action::Output(PortId(9)), Action::Output(PortId(3))]);
        assert!(r.emitted.is_empty());
        assert_eq!(r.discarded, vec![(PortId(9), Discard::UnknownPort), (PortId(3), Discard::PortDisabled)]);
        assert_eq!(s.set_port(PortId(9), true), Err(SwitchError::UnknownPort(PortId(9))));
    }

    #[test]
    fn disabled_ingress_discards() {
        let mut s = sw();
        s.set_port(PortId(1), false).unwrap();
        assert_eq!(s.process(&pkt(A, B, 1)), Verdict::IngressDisabled);
        s.set_port(PortId(1), true).unwrap();
        s.set_port(PortId(1), true).unwrap();
        assert_eq!(ports(&s.process(&pkt(A, B, 1))), vec![2, 3]);
    }

    #[test]
    fn learning_switch() {
        let mut s = sw();
        // unknown destination floods
        assert_eq!(ports(&s.process(&pkt(A, B, 1))), vec![2, 3]);
        // reply is switched straight back
        assert_eq!(ports(&s.process(&pkt(B, A, 2))), vec![1]);
        assert_eq!(s.process(&pkt(C, A, 1)), Verdict::Filtered);
    }

    #[test]
    fn rule_overrides_default_path() {
        let mut s = sw();
        s.install_flow(FlowRule {
            cookie: 5,
            priority: 1000,
            matcher: FlowMatch { in_port: Some(PortId(1)), ..Default::default() },
            actions: vec![],
        });
        assert_eq!(s.process(&pkt(A, B, 1)), Verdict::RuleDrop { cookie: 5 });
        // rule hits do not teach the learning table
        assert_eq!(s.learned_port(A), None);
    }
}

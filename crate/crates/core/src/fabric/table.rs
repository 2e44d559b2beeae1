use alloc::vec::Vec;
use core::cmp::Reverse;
use core::net::Ipv4Addr;

use super::{EthType, MacAddr, PacketHeader, PortId};

/// Exact-or-wildcard match over header fields; `None` is a wildcard.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FlowMatch {
    pub in_port: Option<PortId>,
    pub eth_type: Option<EthType>,
    pub src_mac: Option<MacAddr>,
    pub dst_mac: Option<MacAddr>,
    pub src_ip: Option<Ipv4Addr>,
    pub dst_ip: Option<Ipv4Addr>,
}

fn field_ok<T: PartialEq>(want: &Option<T>, have: &T) -> bool {
    want.as_ref().is_none_or(|w| w == have)
}

impl FlowMatch {
    pub fn matches(&self, pkt: &PacketHeader) -> bool {
        field_ok(&self.in_port, &pkt.in_port)
            && field_ok(&self.eth_type, &pkt.eth_type)
            && field_ok(&self.src_mac, &pkt.src_mac)
            && field_ok(&self.dst_mac, &pkt.dst_mac)
            && field_ok(&self.src_ip, &pkt.src_ip)
            && field_ok(&self.dst_ip, &pkt.dst_ip)
    }

    /// Number of non-wildcard fields.
    pub fn specificity(&self) -> usize {
        [
            self.in_port.is_some(),
            self.eth_type.is_some(),
            self.src_mac.is_some(),
            self.dst_mac.is_some(),
            self.src_ip.is_some(),
            self.dst_ip.is_some(),
        ]
        .iter()
        .filter(|&&b| b)
        .count()
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Action {
    Output(PortId),
    /// Rewrites the destination MAC for every later output in the list.
    ModDstMac(MacAddr),
    Drop,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowRule {
    pub cookie: u64,
    pub priority: u16,
    pub matcher: FlowMatch,
    /// Empty means drop.
    pub actions: Vec<Action>,
}

impl FlowRule {
    pub fn rewrites_headers(&self) -> bool {
        self.actions.iter().any(|a| matches!(a, Action::ModDstMac(_)))
    }

    pub fn is_drop(&self) -> bool {
        self.actions.is_empty() || self.actions.contains(&Action::Drop)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Entry {
    rule: FlowRule,
    order: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Installed {
    Added,
    /// An existing rule with the same match and priority was overwritten.
    Replaced,
}

/// Single-table flow store.
///
/// Lookup picks the highest priority matching rule, then the most specific,
/// then the lowest cookie, then the earliest installed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FlowTable {
    entries: Vec<Entry>,
    next_order: u64,
}

impl FlowTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn rules(&self) -> impl Iterator<Item = &FlowRule> {
        self.entries.iter().map(|e| &e.rule)
    }

    pub fn lookup(&self, pkt: &PacketHeader) -> Option<&FlowRule> {
        self.entries
            .iter()
            .filter(|e| e.rule.matcher.matches(pkt))
            .max_by_key(|e| {
                (
                    e.rule.priority,
                    e.rule.matcher.specificity(),
                    Reverse(e.rule.cookie),
                    Reverse(e.order),
                )
            })
            .map(|e| &e.rule)
    }

    /// Adds a rule, overwriting cookie and actions of any rule with an
    /// identical match and priority.
    pub fn install(&mut self, rule: FlowRule) -> Installed {
        if let Some(e) = self
            .entries
            .iter_mut()
            .find(|e| e.rule.priority == rule.priority && e.rule.matcher == rule.matcher)
        {
            e.rule = rule;
            return Installed::Replaced;
        }
        self.entries.push(Entry {
            rule,
            order: self.next_order,
        });
        self.next_order += 1;
        Installed::Added
    }

    /// Removes every rule whose cookie agrees with `cookie` on the bits set in
    /// `mask`. Returns how many were removed.
    pub fn delete_by_cookie(&mut self, cookie: u64, mask: u64) -> usize {
        let before = self.entries.len();
        self.entries.retain(|e| e.rule.cookie & mask != cookie & mask);
        before - self.entries.len()
    }
}

/// Winning rule for `pkt`, or `None` on a table miss.
pub fn match_packet<'t>(table: &'t FlowTable, pkt: &PacketHeader) -> Option<&'t FlowRule> {
    table.lookup(pkt)
}

//! OpenFlow-style switching: flow tables, action lists, a learning-switch
//! fallback, and the text form of flow-mods.

mod flowmod;
mod packet;
mod switch;
mod table;

pub use flowmod::{
    parse_flow_mod, parse_flow_mods, parse_rule, print_flow_mod, print_rule, Bindings, FlowMod, FlowModError,
    NumberedMod, MIGRATION_PRIORITY,
};
pub use packet::{ArpOp, EthType, MacAddr, PacketHeader, ParseMacError, PortId};
pub use switch::{ActionResult, Discard, Emission, Port, SwitchError, SwitchModel, Verdict};
pub use table::{match_packet, Action, FlowMatch, FlowRule, FlowTable, Installed};

//! Sequential logic encryption with PRNG-driven back-jumping.
//!
//! The crate covers the whole flow on ISCAS'89 style `.bench` netlists:
//! parsing and emission ([`netlist`]), the XNOR LFSR ([`lfsr`]), the
//! encryption transform ([`encrypt`]), cycle-accurate simulation with a
//! trusted key manager ([`sim`]), corruption and cost analyses ([`eval`]),
//! and an oracle-guided SAT attack ([`attack`]).

pub mod attack;
pub mod bits;
pub mod encrypt;
pub mod eval;
pub mod lfsr;
pub mod netlist;
pub mod sim;

pub use bits::Bits;
pub use encrypt::{encrypt, EncryptConfig, EncryptedDesign, KeySchedule};
pub use lfsr::Lfsr;
pub use netlist::{emit_bench, parse_bench, CircuitStats, GateKind, Netlist, NetlistError};

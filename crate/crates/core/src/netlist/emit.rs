use std::fmt::Write;

use super::Netlist;

/// Renders `nl` as `.bench` text with LF line endings. Declaration order is
/// preserved, so equal netlists give byte-identical output.
pub fn emit_bench(nl: &Netlist) -> String {
    let st = nl.stats();
    let mut out = String::new();
    let _ = writeln!(out, "# {}", nl.name());
    let _ = writeln!(out, "# {} inputs", st.n_inputs);
    let _ = writeln!(out, "# {} outputs", st.n_outputs);
    let _ = writeln!(out, "# {} D-type flipflops", st.n_dffs);
    let _ = writeln!(out, "# {} gates", st.n_gates);
    out.push('\n');
    for i in nl.inputs() {
        let _ = writeln!(out, "INPUT({i})");
    }
    out.push('\n');
    for o in nl.outputs() {
        let _ = writeln!(out, "OUTPUT({o})");
    }
    out.push('\n');
    for d in nl.dffs() {
        let _ = writeln!(out, "{} = DFF({})", d.q, d.d);
    }
    out.push('\n');
    for g in nl.gates() {
        let _ = writeln!(out, "{} = {}({})", g.output, g.kind, g.inputs.join(", "));
    }
    out
}

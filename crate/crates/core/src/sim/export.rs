use std::io::{self, Write};

use super::Trace;
use crate::netlist::Netlist;

/// One line per cycle: `cycle inputs outputs state`, hex, bit 0 = LSB.
pub fn write_columnar<W: Write>(w: &mut W, trace: &Trace) -> io::Result<()> {
    writeln!(w, "# cycle inputs outputs state")?;
    for (t, c) in trace.cycles.iter().enumerate() {
        writeln!(w, "{t} {} {} {}", c.inputs, c.outputs, c.state)?;
    }
    Ok(())
}

fn vcd_id(mut k: usize) -> String {
    // Printable identifier codes '!'..='~'.
    let mut s = String::new();
    loop {
        s.push((b'!' + (k % 94) as u8) as char);
        k /= 94;
        if k == 0 {
            break;
        }
    }
    s
}

/// Value change dump with one scalar per input, output and DFF.
pub fn write_vcd<W: Write>(w: &mut W, nl: &Netlist, trace: &Trace) -> io::Result<()> {
    let mut signals: Vec<&str> = Vec::new();
    signals.extend(nl.inputs().iter().map(String::as_str));
    signals.extend(nl.outputs().iter().map(String::as_str));
    signals.extend(nl.dffs().iter().map(|d| d.q.as_str()));
    writeln!(w, "$timescale 1ns $end")?;
    writeln!(w, "$scope module {} $end", nl.name())?;
    for (k, name) in signals.iter().enumerate() {
        writeln!(w, "$var wire 1 {} {} $end", vcd_id(k), name)?;
    }
    writeln!(w, "$upscope $end")?;
    writeln!(w, "$enddefinitions $end")?;
    let mut last: Vec<Option<bool>> = vec![None; signals.len()];
    for (t, c) in trace.cycles.iter().enumerate() {
        let values = c
            .inputs
            .as_slice()
            .iter()
            .chain(c.outputs.as_slice())
            .chain(c.state.as_slice());
        let mut stamped = false;
        for (k, &v) in values.enumerate() {
            if last[k] != Some(v) {
                if !stamped {
                    writeln!(w, "#{}", t * 10)?;
                    stamped = true;
                }
                writeln!(w, "{}{}", u8::from(v), vcd_id(k))?;
                last[k] = Some(v);
            }
        }
    }
    writeln!(w, "#{}", trace.len() * 10)?;
    Ok(())
}

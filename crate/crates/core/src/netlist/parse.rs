use super::{Dff, Gate, GateKind, Netlist, NetlistError};

#[derive(Debug, Clone, PartialEq)]
enum Tok<'a> {
    Ident(&'a str),
    LParen,
    RParen,
    Comma,
    Eq,
}

fn is_ident_char(c: char) -> bool {
    !(c.is_whitespace() || matches!(c, '(' | ')' | ',' | '=' | '#'))
}

/// Tokens of one line with their 1-based columns.
fn lex(line: &str) -> Vec<(Tok<'_>, usize)> {
    let mut toks = Vec::new();
    let mut chars = line.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        let col = line[..pos].chars().count() + 1;
        match c {
            '#' => break,
            c if c.is_whitespace() => {
                chars.next();
            }
            '(' | ')' | ',' | '=' => {
                chars.next();
                let t = match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    _ => Tok::Eq,
                };
                toks.push((t, col));
            }
            _ => {
                let start = pos;
                let mut end = pos;
                while let Some(&(p, c)) = chars.peek() {
                    if !is_ident_char(c) {
                        break;
                    }
                    end = p + c.len_utf8();
                    chars.next();
                }
                toks.push((Tok::Ident(&line[start..end]), col));
            }
        }
    }
    toks
}

struct LineParser<'a> {
    toks: Vec<(Tok<'a>, usize)>,
    pos: usize,
    line: usize,
    eol_col: usize,
}

impl<'a> LineParser<'a> {
    fn err(&self, column: usize, message: impl Into<String>) -> NetlistError {
        NetlistError::Syntax {
            line: self.line,
            column,
            message: message.into(),
        }
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.eol_col, |t| t.1)
    }

    fn next(&mut self) -> Option<Tok<'a>> {
        let t = self.toks.get(self.pos).map(|t| t.0.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok<'static>, what: &str) -> Result<(), NetlistError> {
        let col = self.col();
        match self.next() {
            Some(t) if t == want => Ok(()),
            _ => Err(self.err(col, format!("expected {what}"))),
        }
    }

    fn ident(&mut self, what: &str) -> Result<&'a str, NetlistError> {
        let col = self.col();
        match self.next() {
            Some(Tok::Ident(s)) => Ok(s),
            _ => Err(self.err(col, format!("expected {what}"))),
        }
    }

    /// `( a , b , ... )`
    fn arg_list(&mut self) -> Result<Vec<String>, NetlistError> {
        self.expect(Tok::LParen, "`(`")?;
        let mut args = Vec::new();
        if self.toks.get(self.pos).map(|t| &t.0) == Some(&Tok::RParen) {
            self.pos += 1;
            return Ok(args);
        }
        loop {
            args.push(self.ident("net name")?.to_string());
            let col = self.col();
            match self.next() {
                Some(Tok::Comma) => continue,
                Some(Tok::RParen) => break,
                _ => return Err(self.err(col, "expected `,` or `)`")),
            }
        }
        Ok(args)
    }

    fn finish(&mut self) -> Result<(), NetlistError> {
        if self.pos < self.toks.len() {
            let col = self.col();
            return Err(self.err(col, "unexpected trailing text"));
        }
        Ok(())
    }
}

/// Parses `.bench` text. The netlist is named `name`.
pub fn parse_bench(text: &str, name: &str) -> Result<Netlist, NetlistError> {
    let mut inputs = Vec::new();
    let mut outputs = Vec::new();
    let mut gates = Vec::new();
    let mut dffs = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        let toks = lex(raw);
        if toks.is_empty() {
            continue;
        }
        let mut p = LineParser {
            toks,
            pos: 0,
            line: lineno + 1,
            eol_col: raw.chars().count() + 1,
        };
        let first_col = p.col();
        let head = p.ident("a declaration")?;
        if p.toks.get(1).map(|t| &t.0) == Some(&Tok::Eq) {
            p.pos += 1;
            let kind_col = p.col();
            let kind_word = p.ident("gate type")?;
            let args = p.arg_list()?;
            p.finish()?;
            if kind_word.eq_ignore_ascii_case("DFF") {
                if args.len() != 1 {
                    return Err(p.err(kind_col, "DFF takes exactly one input"));
                }
                dffs.push(Dff::new(head, args.into_iter().next().unwrap()));
            } else {
                let kind = GateKind::from_keyword(kind_word)
                    .ok_or_else(|| p.err(kind_col, format!("unknown gate type `{kind_word}`")))?;
                gates.push(Gate::new(head, kind, args));
            }
        } else if head.eq_ignore_ascii_case("INPUT") || head.eq_ignore_ascii_case("OUTPUT") {
            let args = p.arg_list()?;
            p.finish()?;
            if args.len() != 1 {
                return Err(p.err(first_col, format!("{head} takes exactly one net")));
            }
            let net = args.into_iter().next().unwrap();
            if head.eq_ignore_ascii_case("INPUT") {
                inputs.push(net);
            } else {
                outputs.push(net);
            }
        } else {
            return Err(p.err(first_col, format!("unrecognized statement `{head}`")));
        }
    }

    let nl = Netlist::new(name, inputs, outputs, gates, dffs)?;
    let dangling = nl.dangling_nets();
    if !dangling.is_empty() {
        log::warn!(
            "{}: {} gate output(s) drive nothing (first: {})",
            name,
            dangling.len(),
            dangling[0]
        );
    }
    Ok(nl)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_not() {
        let nl = parse_bench("INPUT(a)\nOUTPUT(y)\ny = NOT(a)", "t").unwrap();
        let st = nl.stats();
        assert_eq!(
            (st.n_inputs, st.n_outputs, st.n_dffs, st.n_gates),
            (1, 1, 0, 1)
        );
    }

    #[test]
    fn undefined_reference() {
        let err = parse_bench("y = AND(a, b)", "t").unwrap_err();
        assert_eq!(
            err,
            NetlistError::UndefinedNet {
                net: "a".into(),
                user: "y".into()
            }
        );
    }

    #[test]
    fn keywords_case_insensitive_whitespace_tolerant() {
        let text = "input ( a )\r\n  Input(b)\noutput(y)   # trailing\n y=nand( a ,b )\n";
        let nl = parse_bench(text, "t").unwrap();
        assert_eq!(nl.gates()[0].kind, GateKind::Nand);
        assert_eq!(nl.gates()[0].inputs, vec!["a", "b"]);
    }

    #[test]
    fn net_names_are_case_sensitive() {
        let err = parse_bench("INPUT(a)\nOUTPUT(y)\ny = NOT(A)", "t").unwrap_err();
        assert!(matches!(err, NetlistError::UndefinedNet { .. }));
    }

    #[test]
    fn syntax_error_position() {
        let err = parse_bench("INPUT(a)\ny = AND(a,, a)\n", "t").unwrap_err();
        assert_eq!(
            err,
            NetlistError::Syntax {
                line: 2,
                column: 11,
                message: "expected net name".into()
            }
        );
        let err = parse_bench("INPUT(a)\ny = FOO(a, a)", "t").unwrap_err();
        assert!(matches!(
            err,
            NetlistError::Syntax {
                line: 2,
                column: 5,
                ..
            }
        ));
        let err = parse_bench("INPUT(a\n", "t").unwrap_err();
        assert!(matches!(
            err,
            NetlistError::Syntax {
                line: 1,
                column: 8,
                ..
            }
        ));
    }

    #[test]
    fn dff_arity() {
        let err = parse_bench("INPUT(a)\nq = DFF(a, a)", "t").unwrap_err();
        assert!(matches!(err, NetlistError::Syntax { .. }));
    }

    #[test]
    fn cyclic_input_rejected() {
        let err = parse_bench("INPUT(a)\nx = AND(a, y)\ny = OR(a, x)\nOUTPUT(y)", "t").unwrap_err();
        assert!(matches!(err, NetlistError::CombinationalCycle(_)));
    }

    #[test]
    fn multi_input_gates() {
        let nl = parse_bench(
            "INPUT(a)\nINPUT(b)\nINPUT(c)\nOUTPUT(y)\ny = AND(a, b, c)",
            "t",
        )
        .unwrap();
        assert_eq!(nl.gates()[0].inputs.len(), 3);
    }
}

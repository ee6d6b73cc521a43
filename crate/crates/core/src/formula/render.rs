use super::Formula;

const IFF: u8 = 1;
const IMPLIES: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Iff(..) => IFF,
        Formula::Implies(..) => IMPLIES,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        _ => UNARY,
    }
}

/// Renders a formula with the fewest parentheses that still parse back to
/// the same tree.
pub fn render(f: &Formula) -> String {
    let mut out = String::new();
    write(f, &mut out);
    out
}

fn write_wrapped(f: &Formula, wrap: bool, out: &mut String) {
    if wrap {
        out.push('(');
        write(f, out);
        out.push(')');
    } else {
        write(f, out);
    }
}

fn write_binary(
    l: &Formula,
    op: &str,
    r: &Formula,
    level: u8,
    right_assoc: bool,
    out: &mut String,
) {
    let (wrap_l, wrap_r) = if right_assoc {
        (precedence(l) <= level, precedence(r) < level)
    } else {
        (precedence(l) < level, precedence(r) <= level)
    };
    write_wrapped(l, wrap_l, out);
    out.push(' ');
    out.push_str(op);
    out.push(' ');
    write_wrapped(r, wrap_r, out);
}

fn write_modal(symbol: &str, x: &Formula, out: &mut String) {
    out.push_str(symbol);
    if precedence(x) < UNARY {
        write_wrapped(x, true, out);
    } else {
        out.push(' ');
        write(x, out);
    }
}

fn write(f: &Formula, out: &mut String) {
    match f {
        Formula::Atom(name) => out.push_str(name),
        Formula::Top => out.push('T'),
        Formula::Bottom => out.push('F'),
        Formula::Not(x) => {
            out.push('~');
            write_wrapped(x, precedence(x) < UNARY, out);
        }
        Formula::Obl(x) => write_modal("O", x, out),
        Formula::PermS(x) => write_modal("Ps", x, out),
        Formula::PermW(x) => write_modal("Pw", x, out),
        Formula::And(l, r) => write_binary(l, "&", r, AND, false, out),
        Formula::Or(l, r) => write_binary(l, "|", r, OR, false, out),
        Formula::Implies(l, r) => write_binary(l, "->", r, IMPLIES, true, out),
        Formula::Iff(l, r) => write_binary(l, "<->", r, IFF, false, out),
    }
}

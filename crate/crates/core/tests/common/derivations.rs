//! Worked graphs and the formulas they should translate to.

use amr_intens::penman::parse;
use amr_intens::scope::{derive_reading, translate_scoped, DeterminerTable, StoredValue};
use amr_intens::stlc::reader::read_term;
use amr_intens::stlc::{equiv_mod_ac_alpha, pretty, Term, Type};
use amr_intens::translate::{
    lexicon, translate_ext, translate_ext_closed, translate_int_closed, Regime,
};

use super::checks::Check;

pub const ADMIRE: &str = "(a / admire-01
    :ARG0 (b / boy)
    :ARG1 b)";

pub const BELIEVE: &str = "(b / believe-01
    :ARG0 (b2 / boy)
    :content (s / sick-05
        :ARG1 b2))";

pub const BELIEVE_REENTRANT: &str = "(b / believe-01
    :ARG0 (b2 / boy
        :ARG1-of (s / sick-05))
    :content s)";

pub const EVERY_BOY: &str = "(d / dance-01
    :ARG0 (b / boy
        :quant every))";

pub const EVERY_BOY_SCOPED: &str = "(s / scope
    :ARG0 b
    :pred (d / dance-01
        :ARG0 (b / boy
            :quant every)))";

pub const DE_RE: &str = "(s / scope
    :ARG0 v
    :pred (h / hope-01
        :ARG0 (b / boy)
        :content (b2 / buy-01
            :ARG0 b
            :ARG1 (v / violin
                :quant a))))";

pub const DE_DICTO: &str = "(h / hope-01
    :ARG0 (b / boy)
    :content (b2 / buy-01
        :ARG0 b
        :ARG1 (v / violin)))";

/// The buy event is `b3`: `b` already names the boy.
pub const INTERMEDIATE: &str = "(t / think-01
    :ARG0 (b / boy)
    :content (s / scope
        :ARG0 v
        :pred (h / hope-01
            :ARG0 (g / girl)
            :content (b3 / buy-01
                :ARG0 g
                :ARG1 (v / violin
                    :quant a)))))";

pub const THINK_DE_RE: &str = "(s / scope
    :ARG0 v
    :pred (t / think-01
        :ARG0 (b / boy)
        :content (h / hope-01
            :ARG0 (g / girl)
            :content (b3 / buy-01
                :ARG0 g
                :ARG1 (v / violin
                    :quant a)))))";

pub const THINK_DE_DICTO: &str = "(t / think-01
    :ARG0 (b / boy)
    :content (h / hope-01
        :ARG0 (g / girl)
        :content (b3 / buy-01
            :ARG0 g
            :ARG1 (v / violin
                :quant a))))";

pub const NESTED: &str = "(d / difficult
    :domain (c / class
        :quant every
        :prep-with (p / professor
            :quant 2)))";

pub fn nested_scoped(first: &str, second: &str) -> String {
    format!("(s / scope :ARG0 {first} :ARG1 {second} :pred {NESTED})")
}

const DETERMINERS: [&str; 4] = ["every", "a", "some", "two"];

pub fn read(src: &str, regime: Regime) -> Term {
    let ty = regime.prop_type();
    read_term(src, Some(&ty), &lexicon(regime, DETERMINERS)).unwrap()
}

/// Reads an extensional `src` with `free` as free individual variables.
pub fn read_open(src: &str, free: &[&str], ty: Type) -> Term {
    let binders: String = free.iter().map(|x| format!("\\{x}:e . ")).collect();
    let whole = Type::function(free.iter().map(|_| Type::E), ty);
    let mut term = read_term(
        &format!("{binders}{src}"),
        Some(&whole),
        &lexicon(Regime::Extensional, DETERMINERS),
    )
    .unwrap();
    for _ in free {
        let Term::Lam { body, .. } = term else {
            unreachable!()
        };
        term = *body;
    }
    term
}

fn read_quantifier(src: &str, free: &[&str]) -> Term {
    read_open(src, free, Regime::Extensional.quantifier_type())
}

pub fn reading(src: &str, regime: Regime) -> Term {
    derive_reading(&parse(src).unwrap(), regime, &DeterminerTable::standard()).unwrap()
}

fn stored(src: &str) -> Result<StoredValue, String> {
    translate_scoped(
        &parse(src).unwrap(),
        Regime::Extensional,
        &DeterminerTable::standard(),
    )
    .map_err(|e| e.to_string())
}

fn same(what: &str, actual: &Term, expected: &Term) -> Check {
    if equiv_mod_ac_alpha(actual, expected) {
        Ok(())
    } else {
        Err(format!(
            "{what}: got {} expected {}",
            pretty(actual),
            pretty(expected)
        ))
    }
}

fn same_keys(value: &StoredValue, keys: &[&str]) -> Check {
    let mut got: Vec<&str> = value.store.keys().collect();
    got.sort();
    if got == keys {
        Ok(())
    } else {
        Err(format!("store keys {got:?}, expected {keys:?}"))
    }
}

pub fn admire() -> Check {
    let g = parse(ADMIRE).unwrap();
    let open = translate_ext(&g).map_err(|e| e.to_string())?;
    same(
        "open",
        &open,
        &read_open(
            "admire-01(a) & ARG0(a)(b) & boy(b) & ARG1(a)(b)",
            &["a", "b"],
            Type::T,
        ),
    )?;
    let closed = translate_ext_closed(&g).map_err(|e| e.to_string())?;
    same(
        "closed",
        &closed,
        &read(
            "exists a b . admire-01(a) & ARG0(a)(b) & boy(b) & ARG1(a)(b)",
            Regime::Extensional,
        ),
    )
}

pub fn believe() -> Check {
    let actual = translate_int_closed(&parse(BELIEVE).unwrap()).map_err(|e| e.to_string())?;
    let expected = read(
        "\\w . exists b b2 . believe-01(b)(w) & boy(b2)(w) & ARG0(b)(b2)(w)
            & cont(b)(\\w2 . exists s . sick-05(s)(w2) & ARG1(s)(b2)(w2))(w)",
        Regime::Intensional,
    );
    same("believe", &actual, &expected)
}

pub fn every_boy_store() -> Check {
    let v = stored(EVERY_BOY)?;
    same_keys(&v, &["b"])?;
    same(
        "b",
        v.store.get("b").unwrap(),
        &read_quantifier("every(boy)", &[]),
    )?;
    same(
        "ordinary",
        &v.ordinary,
        &read_open("dance-01(d) & ARG0(d)(b)", &["d", "b"], Type::T),
    )
}

pub fn every_boy_scope_node() -> Check {
    let v = stored(EVERY_BOY_SCOPED)?;
    same_keys(&v, &[])?;
    let expected = read(
        "every(boy)(\\b . exists d . dance-01(d) & ARG0(d)(b))",
        Regime::Extensional,
    );
    same("ordinary", &v.ordinary, &expected)?;
    same(
        "reading",
        &reading(EVERY_BOY_SCOPED, Regime::Extensional),
        &expected,
    )
}

pub fn de_re() -> Check {
    let expected = read(
        "\\w . exists v b h . violin(v)(w) & hope-01(h)(w) & boy(b)(w) & ARG0(h)(b)(w)
            & cont(h)(\\w2 . exists b2 . buy-01(b2)(w2) & ARG0(b2)(b)(w2) & ARG1(b2)(v)(w2))(w)",
        Regime::Intensional,
    );
    same("de re", &reading(DE_RE, Regime::Intensional), &expected)
}

pub fn de_dicto() -> Check {
    let expected = read(
        "\\w . exists h b . hope-01(h)(w) & boy(b)(w) & ARG0(h)(b)(w)
            & cont(h)(\\w2 . exists b2 v . buy-01(b2)(w2) & violin(v)(w2)
                & ARG0(b2)(b)(w2) & ARG1(b2)(v)(w2))(w)",
        Regime::Intensional,
    );
    let closed = translate_int_closed(&parse(DE_DICTO).unwrap()).map_err(|e| e.to_string())?;
    same("close", &closed, &expected)?;
    same(
        "reading",
        &reading(DE_DICTO, Regime::Intensional),
        &expected,
    )
}

pub fn nested_store() -> Check {
    let v = stored(NESTED)?;
    same_keys(&v, &["c", "p"])?;
    same(
        "p",
        v.store.get("p").unwrap(),
        &read_quantifier("two(professor)", &[]),
    )?;
    same(
        "c",
        v.store.get("c").unwrap(),
        &read_quantifier("every(\\x . class(x) & prep-with(x)(p))", &["p"]),
    )?;
    same(
        "ordinary",
        &v.ordinary,
        &read_open("difficult(d) & domain(d)(c)", &["d", "c"], Type::T),
    )
}

/// Every worked derivation, by name.
pub fn all() -> Vec<(&'static str, Check)> {
    vec![
        ("admire", admire()),
        ("believe", believe()),
        ("every-boy store", every_boy_store()),
        ("every-boy scope node", every_boy_scope_node()),
        ("de re", de_re()),
        ("de dicto", de_dicto()),
        ("nested store", nested_store()),
    ]
}

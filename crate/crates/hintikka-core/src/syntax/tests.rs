use super::*;
use crate::connectives::{expand_connective, match_neg, Connective};
use crate::normalize::normalize;
use crate::prop::Prop;
use crate::signature::{Flavor, Signature};
use crate::term::Term;
use crate::ty::Type;

fn blue_ab() -> Signature {
    Signature::blue()
        .with_param("a", Type::Iota)
        .with_param("b", Type::Iota)
}

fn red_ab() -> Signature {
    Signature::red()
        .with_param("a", Type::Iota)
        .with_param("b", Type::Iota)
}

#[test]
fn parses_a_simple_equation() {
    let t = parse_sentence("a =[i] b", &blue_ab()).unwrap();
    let a = Term::param("a", Type::Iota);
    let b = Term::param("b", Type::Iota);
    assert_eq!(t, Term::prim_eq(Type::Iota, a, b));
}

#[test]
fn blue_negation_expands_to_equation_with_bottom() {
    let t = parse_sentence("~ (a =[i] b)", &blue_ab()).unwrap();
    let n = normalize(&t);
    let inner = match_neg(&n).expect("negation shape");
    let a = Term::param("a", Type::Iota);
    let b = Term::param("b", Type::Iota);
    assert_eq!(*inner, Term::prim_eq(Type::Iota, a, b));
}

#[test]
fn beta_redex_in_source_normalizes_away() {
    let t = parse_sentence("(\\X:i. X) a =[i] a", &blue_ab()).unwrap();
    let a = Term::param("a", Type::Iota);
    assert_eq!(normalize(&t), Term::prim_eq(Type::Iota, a.clone(), a));
}

#[test]
fn lambda_binds_by_position_not_name() {
    let s1 = parse_sentence("(\\X:i. X) a =[i] a", &blue_ab()).unwrap();
    let s2 = parse_sentence("(\\Y:i. Y) a =[i] a", &blue_ab()).unwrap();
    assert_eq!(s1, s2);
}

#[test]
fn unknown_symbol_is_reported() {
    assert!(matches!(
        parse_sentence("c =[i] c", &blue_ab()),
        Err(ParseError::UnknownSymbol(n)) if n == "c"
    ));
}

#[test]
fn non_boolean_sentence_is_rejected() {
    assert!(matches!(
        parse_sentence("a", &blue_ab()),
        Err(ParseError::NotBoolean(Type::Iota))
    ));
}

#[test]
fn open_term_is_rejected() {
    // X is not bound anywhere
    assert!(parse_sentence("X =[i] X", &blue_ab()).is_err());
}

#[test]
fn red_rejects_sugar() {
    assert!(parse_sentence("T", &red_ab()).is_err());
    assert!(parse_sentence("a =[i] a & a =[i] a", &red_ab()).is_err());
    // primitive negation is fine
    let t = parse_sentence("~ (a =[i] b)", &red_ab()).unwrap();
    assert!(matches!(t, Term::App(..)));
}

#[test]
fn precedence_application_tighter_than_negation() {
    let sig = Signature::blue()
        .with_param("p", Type::fun(Type::Iota, Type::O))
        .with_param("a", Type::Iota);
    // ~ p a  ==  ~(p a)
    let t1 = parse_sentence("~ p a", &sig).unwrap();
    let t2 = parse_sentence("~ (p a)", &sig).unwrap();
    assert_eq!(t1, t2);
}

#[test]
fn precedence_negation_tighter_than_equality() {
    let sig = Signature::blue().with_param("q", Type::O);
    // ~ q =[o] q  ==  (~q) =[o] q
    let t1 = parse_sentence("~ q =[o] q", &sig).unwrap();
    let t2 = parse_sentence("(~ q) =[o] q", &sig).unwrap();
    assert_eq!(t1, t2);
}

#[test]
fn arrow_is_right_associative_and_loosest() {
    let sig = Signature::blue().with_param("q", Type::O).with_param("r", Type::O);
    let t1 = parse_sentence("q -> r -> q", &sig).unwrap();
    let t2 = parse_sentence("q -> (r -> q)", &sig).unwrap();
    assert_eq!(t1, t2);
    let t3 = parse_sentence("q & r -> q", &sig).unwrap();
    let t4 = parse_sentence("(q & r) -> q", &sig).unwrap();
    assert_eq!(t3, t4);
}

#[test]
fn quantifier_parses_as_pi_application() {
    let sig = Signature::blue().with_param("p", Type::fun(Type::Iota, Type::O));
    let t = parse_sentence("![i] p", &sig).unwrap();
    let pi = expand_connective(&Connective::Pi(Type::Iota));
    assert_eq!(t, Term::app(pi, Term::param("p", Type::fun(Type::Iota, Type::O))));
}

#[test]
fn print_parse_round_trip_on_core_shapes() {
    let sig = blue_ab();
    for src in [
        "a =[i] b",
        "(a =[i] b) =[o] (b =[i] a)",
        "(\\X:i. a =[i] X) b",
        "=[o] =[((o > o) > o)] =[o]",
        "(\\X:(i > o). X a) (=[i] b)",
    ] {
        let t = parse_sentence(src, &sig).unwrap();
        let printed = print_term(&t, Flavor::BlueEqualityOnly);
        let back = parse_sentence(&printed, &sig).unwrap();
        assert_eq!(t, back, "round trip failed for {src}: printed {printed}");
    }
}

#[test]
fn normal_forms_print_and_reparse_exactly() {
    let sig = blue_ab();
    for src in ["~ (a =[i] b)", "T", "F", "a =[i] b & b =[i] a", "![i] (\\X:i. X =[i] a)"] {
        let t = normalize(&parse_sentence(src, &sig).unwrap());
        let printed = print_term(&t, Flavor::BlueEqualityOnly);
        let back = parse_sentence(&printed, &sig).unwrap();
        assert_eq!(t, back, "normal form of {src} printed as {printed}");
    }
}

#[test]
fn red_terms_round_trip() {
    let sig = red_ab();
    for src in ["~ (a =[i] b)", "~ ~ (a =[i] a)", "(~) a =[i] b =[o] F"] {
        // the last one is deliberately not well-typed; skip parse failures
        if let Ok(t) = parse_sentence(src, &sig) {
            let printed = print_term(&t, Flavor::RedNegAndEquality);
            let back = parse_sentence(&printed, &sig).unwrap();
            assert_eq!(t, back);
        }
    }
}

#[test]
fn bare_negation_constant_round_trips_in_red() {
    let sig = Signature::red()
        .with_param("p", Type::fun(Type::fun(Type::O, Type::O), Type::Iota))
        .with_param("a", Type::Iota);
    let t = parse_sentence("a =[i] p (~)", &sig).unwrap();
    let printed = print_term(&t, Flavor::RedNegAndEquality);
    let back = parse_sentence(&printed, &sig).unwrap();
    assert_eq!(t, back);
}

#[test]
fn props_parse_and_round_trip() {
    let sig = red_ab();
    for src in [
        "a !=[i] b",
        "!~ a !=[i] b",
        "!~ !T",
        "a =[i] b",
        "a =[i] a !| b =[i] b",
        "!![i] X. X =[i] a",
    ] {
        let p = parse_prop(src, &sig).unwrap();
        let printed = print_prop(&p, Flavor::RedNegAndEquality);
        let back = parse_prop(&printed, &sig).unwrap();
        assert_eq!(p, back, "prop round trip failed for {src}: printed {printed}");
    }
}

#[test]
fn meta_forall_binds_into_embedded_terms() {
    let sig = red_ab();
    let p = parse_prop("!![i] X. X =[i] a", &sig).unwrap();
    match p {
        Prop::MetaForall(ty, body) => {
            assert_eq!(ty, Type::Iota);
            let a = Term::param("a", Type::Iota);
            let inst = body.instantiate(0, &Term::param("b", Type::Iota));
            assert_eq!(
                inst,
                Prop::Embed(Term::prim_eq(
                    Type::Iota,
                    Term::param("b", Type::Iota),
                    a
                ))
            );
        }
        other => panic!("expected MetaForall, got {other:?}"),
    }
}

#[test]
fn signature_file_parses_in_order() {
    let text = "# parameters\nparam a : i\nparam p : (i > o)\n";
    let sig = parse_signature_file(text, Flavor::BlueEqualityOnly).unwrap();
    let names: Vec<_> = sig.params().map(|(n, _)| n.to_string()).collect();
    assert_eq!(names, vec!["a", "p"]);
    assert_eq!(
        sig.param_type("p"),
        Some(&Type::fun(Type::Iota, Type::O))
    );
}

#[test]
fn sentence_file_skips_comments_and_blanks() {
    let sig = blue_ab();
    let text = "# two sentences\n\na =[i] b\n  b =[i] a  # trailing comment\n";
    let ts = parse_sentence_file(text, &sig).unwrap();
    assert_eq!(ts.len(), 2);
}

#[test]
fn syntax_errors_carry_positions() {
    match parse_sentence("a =[i b", &blue_ab()) {
        Err(ParseError::Syntax { line, col, .. }) => {
            assert_eq!(line, 1);
            assert!(col > 1);
        }
        other => panic!("expected syntax error, got {other:?}"),
    }
}

mod common;

use common::*;
use fpt_core::io::{emit_document, parse_document, Document, Payload};
use fpt_core::lift::make_qpq;
use fpt_core::{Scalar, VPolytope};
use proptest::prelude::*;
use rand::Rng;

fn scalar() -> impl Strategy<Value = Scalar> {
    (-30i64..=30, 1i64..=9, prop::option::of((-9i64..=9, 1i64..=9))).prop_map(|(a, b, rad)| {
        let r = Scalar::from_frac(a, b);
        match rad {
            Some((c, d)) => r + Scalar::from_frac(c, d) * Scalar::sqrt(3).unwrap(),
            None => r,
        }
    })
}

proptest! {
    #[test]
    fn vertex_documents_roundtrip(pts in prop::collection::vec(prop::collection::vec(scalar(), 2), 1..6)) {
        let doc = Document::named("points", Payload::V(VPolytope::hull(2, pts)));
        let text = emit_document(&doc);
        let back = parse_document(&text).unwrap();
        prop_assert_eq!(emit_document(&back), text);
        prop_assert_eq!(back, doc);
    }

    #[test]
    fn h_documents_roundtrip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=3);
        let h = random_hpolytope(&mut r, n, 3, 9);
        let doc = Document::new(Payload::H(h));
        let text = emit_document(&doc);
        let back = parse_document(&text).unwrap();
        prop_assert_eq!(emit_document(&back), text);
    }

    #[test]
    fn framed_documents_roundtrip(p in 1i64..=6, q in -6i64..=6, a in scalar()) {
        prop_assume!(num_integer::Integer::gcd(&p, &q) == 1 && a.is_positive());
        let f = make_qpq(&a, p, q).unwrap();
        let doc = Document::new(Payload::Framed(f));
        let back = parse_document(&emit_document(&doc)).unwrap();
        prop_assert_eq!(back, doc);
    }
}

#[test]
fn corpus_is_in_emitted_form() {
    for (name, doc) in corpus() {
        let text = emit_document(&doc);
        assert_eq!(parse_document(&text).unwrap(), doc, "{name}");
        assert_eq!(emit_document(&parse_document(&text).unwrap()), text, "{name}");
    }
}

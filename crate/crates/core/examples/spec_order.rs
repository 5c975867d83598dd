//! Bounded implementation and equivalence between device programs.

use foregone::scenarios::hybrid::{d_read, d_read_write};
use foregone::scenarios::password::{d_deny, d_pwd, DURESS_PWD};
use foregone::spec_order::{bounded_equivalent, bounded_implements, ProbeBounds};
use foregone::value::Value;

fn main() {
    let b = ProbeBounds::new(3, [Value::from("cats"), Value::Null]);
    let (r, rw) = (d_read("dogs"), d_read_write("dogs"));
    println!("D_read ≺ D_readWrite: {}", bounded_implements(&r, &rw, &b).unwrap());
    println!("D_readWrite ≺ D_read: {}", bounded_implements(&rw, &r, &b).unwrap());
    println!("D_read ∼ D_read: {}", bounded_equivalent(&r, &r.clone(), &b).unwrap());

    let (p, d) = (d_pwd(b"pw", b"m"), d_deny(b"pw", DURESS_PWD, b"m", true));
    for depth in 1..=3 {
        let b = ProbeBounds::new(depth, [Value::from("pw"), Value::pair(Value::bytes(DURESS_PWD), Value::from("x"))]);
        println!(
            "depth {depth}: D_pwd ≺ D_deny {}, D_deny ≺ D_pwd {}",
            bounded_implements(&p, &d, &b).unwrap(),
            bounded_implements(&d, &p, &b).unwrap()
        );
    }
}

use num_traits::ToPrimitive;
use sepprob::hyperg::{pfq_numeric, HyperSeries};
use sepprob::exactnum::rat;

#[test]
fn dbg_gauss() {
    let s = HyperSeries::new(vec![rat(1,3), rat(2,3)], vec![rat(5,6)], rat(27,32)).unwrap();
    let v = pfq_numeric(&s, 128).unwrap();
    let r = rat(8,5);
    println!("lo<=r: {}  r<=hi: {}", v.lo_rational() <= r, r <= v.hi_rational());
    let d = v.value_rational() - &r;
    println!("value - 8/5 = {:.3e}", d.to_f64().unwrap());
    println!("err = {:.3e}", v.abs_error_rational().to_f64().unwrap());
}

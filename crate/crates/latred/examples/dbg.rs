fn main() {
    let c = latred::generate::gen_critical(3);
    for row in c.gram.rows() {
        println!("{:?}", row.iter().map(|x| x.to_string()).collect::<Vec<_>>());
    }
    let gso = latred::verify::ExactGso::from_rational_gram(&c.gram.gram()).unwrap();
    println!("mu(1,0)={} mu(2,0)={} mu(2,1)={}", gso.mu(1,0), gso.mu(2,0), gso.mu(2,1));
}

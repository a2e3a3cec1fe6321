# placeholder bench
fn main() {}

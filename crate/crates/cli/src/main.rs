fn main() {
    println!("cknlab");
}

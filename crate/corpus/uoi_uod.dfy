method Signs(a: int, b: int, p: bool) returns (r: int, q: bool)
{
  r := a + b;
  r := -a;
  q := !p;
  q := p && a < b;
}

method Ops(a: int, b: int, x: int, y: int, p: bool, q: bool) returns (r: int, ok: bool)
  requires y != 0
{
  r := a + b;
  r := x / y;
  ok := p ==> q;
  ok := a < b || p;
  var w: bv8 := 5;
  w := (w & 3) | (w ^ 1);
  w := w << 1;
}

method Compute(a: int, b: int) returns (r: int)
{
  var offset := 3;
  var scale := 2;
  r := a + offset;
  r := r + b * scale;
  r := -r;
  var total := offset;
  r := r + total;
}

method Logic(p: bool, q: bool) returns (z: bool)
{
  z := !p && q;
  z := z || !q;
}

method Swap(a: array<int>, i: int, j: int)
  requires 0 <= i < a.Length && 0 <= j < a.Length
  modifies a
{
  var tmp := a[i];
  a[i] := a[j];
  a[j] := tmp;
  assert a[j] == old(a[i]);
}

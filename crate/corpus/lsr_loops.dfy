method Search(a: array<int>, key: int) returns (idx: int)
{
  idx := -1;
  var i := 0;
  while i < a.Length
    decreases a.Length - i
  {
    if a[i] == key {
      idx := i;
      break;
    }
    i := i + 1;
  }
}

method PrintOdd(n: nat)
{
  for k := 0 to n
  {
    if k % 2 == 0 {
      continue;
    }
    print k, "\n";
  }
}

method Spin()
{
  while true
    decreases *
  {
  }
}

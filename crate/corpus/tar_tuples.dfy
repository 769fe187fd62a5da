method Pairs() returns (r: int)
{
  var t := (1, 2, true);
  var u: (int, bool, int) := (3, false, 4);
  r := t.0 + u.2;
  var flag := t.2;
  print flag, u.1, "\n";
}

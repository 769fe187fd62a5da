class S {
  var v: int

  method Normalize() returns (r: S)
  {
    r := this;
  }

  method Size() returns (n: int)
  {
    n := v;
  }
}

method Use(s: S) returns (m: int)
{
  var t := s.Normalize();
  var n := s.Size();
  m := n;
}

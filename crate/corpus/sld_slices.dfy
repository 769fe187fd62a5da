method Slices(s: seq<int>, n: int) returns (t: seq<int>)
  requires 1 <= n <= |s|
{
  t := s[1..n];
  t := s[1..];
  t := s[..n];
  t := s[..];
}

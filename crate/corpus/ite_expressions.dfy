function Clamp(x: int, lo: int, hi: int): int
  requires lo <= hi
{
  if x < lo then lo else if x > hi then hi else x
}

method Classify(n: int) returns (s: string)
{
  s := if n % 2 == 0 then "even" else "odd";
  var t := match n { case 0 => "zero" case _ => "other" };
  if n > 100 {
    s := s + "!";
  }
}

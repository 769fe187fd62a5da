function Triple(a: int): seq<int>
{
  if a <= 0 then
    []
  else
    var b, c := a + a, a * a;
    [a, b, c]
}
